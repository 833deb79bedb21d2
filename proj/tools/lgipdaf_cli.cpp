// Benchmark harness for the group-aware probabilistic data association
// tracker. Subcommands:
//   sim      one scenario file, one model, N Monte-Carlo runs -> CSV
//   table    the four built-in trajectories x two models -> CSV
//   selftest quick internal consistency checks
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lgipdaf/lgipdaf.hpp"

namespace {

using namespace lgipdaf;

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot open output file: " + out);
  file << text;
}

int run_sim(const std::string& scenario_path, const std::string& model_name, int runs,
            unsigned seed, const std::string& out, double tpd_threshold, int workers) {
  const Scenario scenario = load_scenario(scenario_path);
  const ModelKind model = model_kind_from_string(model_name);
  BenchConfig config;
  config.tpd_threshold = tpd_threshold;
  config.workers = workers;
  const auto results = run_monte_carlo(scenario, model, config, runs, seed);
  const auto agg = aggregate_metrics(results);
  std::ostringstream csv;
  csv << csv_header() << "\n"
      << csv_row(to_string(scenario.kind), model, agg) << "\n";
  write_output(out, csv.str());
  return 0;
}

int run_table(int runs, unsigned seed, const std::string& out, double tpd_threshold,
              int workers) {
  BenchConfig config;
  config.tpd_threshold = tpd_threshold;
  config.workers = workers;
  std::ostringstream csv;
  csv << csv_header() << "\n";
  for (auto kind : {TrajectoryKind::kCircular, TrajectoryKind::kZamboni,
                    TrajectoryKind::kSpiral, TrajectoryKind::kStraight}) {
    for (auto model : {ModelKind::kSe2Cv, ModelKind::kLtiCv}) {
      Scenario scenario;
      scenario.kind = kind;
      const auto results = run_monte_carlo(scenario, model, config, runs, seed);
      csv << csv_row(to_string(kind), model, aggregate_metrics(results)) << "\n";
    }
  }
  write_output(out, csv.str());
  return 0;
}

bool report(const char* name, bool ok) {
  std::printf("%-38s %s\n", name, ok ? "ok" : "FAILED");
  return ok;
}

int run_selftest() {
  bool all = true;

  {  // Exp/Log round trip on random tangents.
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Vector3d v{u(rng), u(rng), u(rng) / 2.0};
      worst = std::max(worst, (SE2d::Exp(v).Log() - v).cwiseAbs().maxCoeff());
    }
    all &= report("exp/log round trip", worst < 1e-9);
  }

  {  // Association probabilities normalize.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Gate<R2d> gate;
    gate.z_hat = R2d::Identity();
    gate.S = Eigen::Matrix2d::Identity();
    gate.tau_g = 1e9;
    FilterParams params;
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<R2d> zs;
      for (int j = 0; j < trial % 7; ++j) zs.emplace_back(Eigen::Vector2d(u(rng), u(rng)));
      const auto assoc = association_probabilities(gate, zs, params);
      double sum = 0.0;
      for (double b : assoc.betas) sum += b;
      ok &= std::abs(sum - 1.0) < 1e-12;
    }
    all &= report("association normalization", ok);
  }

  {  // Clutter rate matches lambda * area.
    Scenario s;
    std::mt19937_64 rng(3);
    double sum = 0.0;
    for (int i = 0; i < 2000; ++i) sum += double(sample_clutter<SE2d>(s, rng).size());
    all &= report("clutter rate", std::abs(sum / 2000.0 - 196.0) < 2.0);
  }

  {  // A clean run is tracked.
    Scenario s;
    s.kind = TrajectoryKind::kStraight;
    s.clutter_lambda = 0.0;
    s.p_d = 1.0;
    const auto metrics = run_single<SE2d>(s, BenchConfig{}, 1);
    all &= report("clutter-free tracking", metrics.tpd > 0.9);
  }

  std::printf("selftest: %s\n", all ? "all checks passed" : "FAILURES detected");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo benchmark harness for a Lie-group IPDA tracker"};
  app.require_subcommand(1);

  std::string scenario_path, model_name = "se2cv", out;
  int runs = 100, workers = 0;
  unsigned seed = 0;
  double tpd_threshold = 1.0;

  auto* sim = app.add_subcommand("sim", "Run one scenario file against one model");
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--model", model_name, "se2cv or lticv");
  sim->add_option("--runs", runs, "Monte-Carlo iterations");
  sim->add_option("--seed", seed, "Base RNG seed (run i uses seed+i)");
  sim->add_option("--out", out, "Output CSV path (default: stdout)");
  sim->add_option("--tpd-threshold", tpd_threshold, "Tracking distance threshold [m]");
  sim->add_option("--workers", workers, "Parallel workers (0: hardware)");

  auto* table = app.add_subcommand(
      "table", "Four built-in trajectories x {se2cv, lticv}, benchmark configuration");
  table->add_option("--runs", runs, "Monte-Carlo iterations per cell");
  table->add_option("--seed", seed, "Base RNG seed");
  table->add_option("--out", out, "Output CSV path (default: stdout)");
  table->add_option("--tpd-threshold", tpd_threshold, "Tracking distance threshold [m]");
  table->add_option("--workers", workers, "Parallel workers (0: hardware)");

  auto* selftest = app.add_subcommand("selftest", "Quick internal consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return run_sim(scenario_path, model_name, runs, seed, out, tpd_threshold, workers);
    }
    if (table->parsed()) return run_table(runs, seed, out, tpd_threshold, workers);
    if (selftest->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
