#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lgipdaf/sim.hpp"
#include "lgipdaf/track_manager.hpp"

namespace lgipdaf {

enum class ModelKind { kSe2Cv, kLtiCv };

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "se2cv") return ModelKind::kSe2Cv;
  if (s == "lticv") return ModelKind::kLtiCv;
  throw std::invalid_argument("unknown model: " + s + " (expected se2cv or lticv)");
}

inline std::string to_string(ModelKind m) {
  return m == ModelKind::kSe2Cv ? "se2cv" : "lticv";
}

/// Per-run statistical measures.
struct RunMetrics {
  double tpd = 0.0;                  // track probability of detection
  std::optional<double> aee;         // average Euclidean position error [m]
  std::optional<double> act;         // time of first confirmation [s]
  double wall_time = 0.0;            // [s]
  int track_count_max = 0;
};

struct BenchConfig {
  FilterParams filter;
  ManagerParams manager;
  double q_pos_rate = 1.0;    // Q = diag(q_pos, q_pos, q_ang, ...) * dt
  double q_ang_rate = 0.1;
  double tpd_threshold = 1.0; // confirmed track within this distance counts as tracking
  int workers = 0;            // 0: hardware concurrency
};

namespace detail {

/// Confirmed-track positions per step, gathered as a run progresses.
struct TrackHistory {
  std::vector<std::vector<Eigen::Vector2d>> confirmed_positions;
  std::optional<double> first_confirmation;
  int track_count_max = 0;
};

template <typename Group>
void record_step(const TrackManager<Group>& manager, double time, TrackHistory& history) {
  std::vector<Eigen::Vector2d> positions;
  for (const auto& track : manager.tracks()) {
    if (track.status == TrackStatus::kConfirmed) {
      positions.push_back(Eigen::Vector2d(track.belief.mean().pose().translation()));
    }
  }
  if (!positions.empty() && !history.first_confirmation) history.first_confirmation = time;
  history.track_count_max =
      std::max(history.track_count_max, static_cast<int>(manager.tracks().size()));
  history.confirmed_positions.push_back(std::move(positions));
}

template <typename Group>
ModelParams<Group> make_model_params(const Scenario& scenario, const BenchConfig& config) {
  ModelParams<Group> model;
  model.q_rate = CvModel<Group>::StateMatrix::Identity() * config.q_pos_rate;
  if constexpr (Group::Dim == 3) {
    model.q_rate(2, 2) = config.q_ang_rate;
    model.q_rate(5, 5) = config.q_ang_rate;
  }
  model.meas_noise = SensorSpace<Group>::noise_cov(scenario);
  return model;
}

template <typename Group>
TrackHistory simulate_run(const Scenario& scenario, const BenchConfig& config,
                          const std::vector<CvState<SE2d>>& truth, unsigned seed) {
  std::mt19937_64 rng(seed);
  TrackManager<Group> manager(make_model_params<Group>(scenario, config), config.filter,
                              config.manager);
  TrackHistory history;
  const int n = scenario.num_steps();
  for (int i = 0; i < n; ++i) {
    const double time = (i + 1) * scenario.dt;
    manager.step(sense<Group>(truth[i + 1], time, scenario, rng));
    record_step(manager, time, history);
  }
  return history;
}

}  // namespace detail

/// Fraction of steps at which some confirmed track lies within
/// dist_threshold of the true position.
inline double compute_tpd(const std::vector<Eigen::Vector2d>& truth_positions,
                          const std::vector<std::vector<Eigen::Vector2d>>& confirmed,
                          double dist_threshold) {
  if (truth_positions.empty()) return 0.0;
  int tracked = 0;
  for (size_t i = 0; i < truth_positions.size(); ++i) {
    for (const auto& p : confirmed[i]) {
      if ((p - truth_positions[i]).norm() <= dist_threshold) {
        ++tracked;
        break;
      }
    }
  }
  return static_cast<double>(tracked) / truth_positions.size();
}

/// Mean position error of the nearest confirmed track over the steps
/// where any confirmed track exists; absent when none ever does.
inline std::optional<double> compute_aee(
    const std::vector<Eigen::Vector2d>& truth_positions,
    const std::vector<std::vector<Eigen::Vector2d>>& confirmed) {
  double sum = 0.0;
  int count = 0;
  for (size_t i = 0; i < truth_positions.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : confirmed[i]) best = std::min(best, (p - truth_positions[i]).norm());
    if (std::isfinite(best)) {
      sum += best;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

/// Mean first-confirmation time over the runs that confirmed.
inline std::optional<double> compute_act(const std::vector<RunMetrics>& runs) {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : runs) {
    if (r.act) {
      sum += *r.act;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

template <typename Group>
RunMetrics run_single(const Scenario& scenario, const BenchConfig& config, unsigned seed) {
  const auto truth = truth_trajectory(scenario);
  const auto t0 = std::chrono::steady_clock::now();
  const auto history = detail::simulate_run<Group>(scenario, config, truth, seed);
  const auto t1 = std::chrono::steady_clock::now();

  std::vector<Eigen::Vector2d> truth_positions;
  truth_positions.reserve(scenario.num_steps());
  for (int i = 1; i <= scenario.num_steps(); ++i) {
    truth_positions.push_back(Eigen::Vector2d(truth[i].pose().translation()));
  }

  RunMetrics metrics;
  metrics.tpd = compute_tpd(truth_positions, history.confirmed_positions, config.tpd_threshold);
  metrics.aee = compute_aee(truth_positions, history.confirmed_positions);
  metrics.act = history.first_confirmation;
  metrics.wall_time = std::chrono::duration<double>(t1 - t0).count();
  metrics.track_count_max = history.track_count_max;
  return metrics;
}

/// Aggregate over a Monte-Carlo batch; means of the per-run metrics.
struct Aggregate {
  double tpd = 0.0;
  std::optional<double> aee;
  std::optional<double> act;
  double wall_time = 0.0;
  int runs = 0;
};

inline Aggregate aggregate_metrics(const std::vector<RunMetrics>& runs) {
  Aggregate agg;
  agg.runs = static_cast<int>(runs.size());
  double aee_sum = 0.0;
  int aee_count = 0;
  for (const auto& r : runs) {
    agg.tpd += r.tpd;
    agg.wall_time += r.wall_time;
    if (r.aee) {
      aee_sum += *r.aee;
      ++aee_count;
    }
  }
  if (agg.runs > 0) agg.tpd /= agg.runs;
  if (aee_count > 0) agg.aee = aee_sum / aee_count;
  agg.act = compute_act(runs);
  return agg;
}

/// Runs are seeded seed + i and independent; workers only affect speed.
inline std::vector<RunMetrics> run_monte_carlo(const Scenario& scenario, ModelKind model,
                                               const BenchConfig& config, int n_runs,
                                               unsigned seed) {
  if (n_runs < 1) throw std::invalid_argument("run_monte_carlo: n_runs must be >= 1");
  std::vector<RunMetrics> results(n_runs);
  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
      const unsigned run_seed = seed + static_cast<unsigned>(i);
      results[i] = model == ModelKind::kSe2Cv
                       ? run_single<SE2d>(scenario, config, run_seed)
                       : run_single<R2d>(scenario, config, run_seed);
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

/// CSV row: scenario, model, runs, tpd, aee_m, act_s, wall_s.
inline std::string csv_header() { return "scenario,model,runs,tpd,aee_m,act_s,wall_s"; }

inline std::string csv_row(const std::string& scenario_name, ModelKind model,
                           const Aggregate& agg) {
  char buf[256];
  const auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("none");
    char b[32];
    std::snprintf(b, sizeof(b), "%.6f", *v);
    return std::string(b);
  };
  std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.6f,%s,%s,%.3f", scenario_name.c_str(),
                to_string(model).c_str(), agg.runs, agg.tpd, opt(agg.aee).c_str(),
                opt(agg.act).c_str(), agg.wall_time);
  return buf;
}

}  // namespace lgipdaf
