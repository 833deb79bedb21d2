// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lgipdaf/lgipdaf.hpp"

using namespace lgipdaf;
using std::numbers::pi;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Generic right-Jacobian series  sum_n (-ad)^n / (n+1)!  truncated at a
// fixed polynomial degree; the independent reference for criterion 1.
Eigen::Matrix3d jr_series(const Eigen::Vector3d& v, int degree) {
  const Eigen::Matrix3d minus_ad = -SE2d::ad(v);
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d sum = term;
  for (int n = 1; n <= degree; ++n) {
    term = (term * minus_ad) / double(n + 1);
    sum += term;
  }
  return sum;
}

// --- criterion 1: exactness of the closed-form group operations ------------
bool criterion_lie_core() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> urho(-20.0, 20.0);
  std::uniform_real_distribution<double> uom(-(pi - 1e-3), pi - 1e-3);

  double roundtrip = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d v{urho(rng), urho(rng), uom(rng)};
    roundtrip = std::max(roundtrip, (SE2d::Exp(v).Log() - v).cwiseAbs().maxCoeff());
  }

  // g Exp(v) = Exp(Ad_g v) g.
  double adjoint = 0.0;
  std::uniform_real_distribution<double> usm(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const SE2d g(uom(rng), {urho(rng), urho(rng)});
    const Eigen::Vector3d v{usm(rng), usm(rng), usm(rng)};
    const SE2d lhs = g.compose(SE2d::Exp(v));
    const SE2d rhs = SE2d::Exp(g.adjoint() * v).compose(g);
    adjoint = std::max(adjoint, rhs.inverse().compose(lhs).Log().cwiseAbs().maxCoeff());
  }

  // Closed-form right Jacobian against the degree-20 series.
  double series = 0.0;
  std::uniform_real_distribution<double> um3(-3.0, 3.0), ur2(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d v{ur2(rng), ur2(rng), um3(rng)};
    series = std::max(series, (SE2d::RightJacobian(v) - jr_series(v, 20)).norm());
  }

  const double elapsed = seconds_since(t0);
  return roundtrip <= 1e-9 && adjoint <= 1e-9 && series <= 1e-10 && elapsed < 1.0;
}

// --- criterion 2: transition/observation Jacobians vs finite differences ---
bool criterion_jacobians() {
  using Model = CvModel<SE2d>;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6, dt = 0.1;

  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    Eigen::Matrix<double, 6, 1> x;
    for (int i = 0; i < 6; ++i) x[i] = u(rng);
    const CvState<SE2d> s = CvState<SE2d>::Exp(x);

    Model::StateMatrix F, G;
    Model::jacobians_f(s, dt, F, G);
    const auto base = Model::transition(s, dt);

    Model::StateMatrix Ffd, Gfd;
    for (int i = 0; i < 6; ++i) {
      Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
      e[i] = h;
      const auto fp = Model::transition(s.compose(CvState<SE2d>::Exp(e)), dt);
      e[i] = -h;
      const auto fm = Model::transition(s.compose(CvState<SE2d>::Exp(e)), dt);
      Ffd.col(i) =
          (base.inverse().compose(fp).Log() - base.inverse().compose(fm).Log()) / (2.0 * h);

      Eigen::Matrix<double, 6, 1> q = Eigen::Matrix<double, 6, 1>::Zero();
      q[i] = h;
      const auto gp = Model::transition(s, q, dt);
      q[i] = -h;
      const auto gm = Model::transition(s, q, dt);
      Gfd.col(i) =
          (base.inverse().compose(gp).Log() - base.inverse().compose(gm).Log()) / (2.0 * h);
    }
    worst = std::max(worst, (F - Ffd).norm() / F.norm());
    worst = std::max(worst, (G - Gfd).norm() / G.norm());

    // H selects the pose block; V is the identity on the measurement tangent.
    Eigen::Matrix3d Hfd_pose, Vfd;
    const SE2d z0 = Model::observe(s);
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d r = Eigen::Vector3d::Zero();
      r[i] = h;
      const Eigen::Vector3d vp = z0.inverse().compose(Model::observe(s, r)).Log();
      r[i] = -h;
      const Eigen::Vector3d vm = z0.inverse().compose(Model::observe(s, r)).Log();
      Vfd.col(i) = (vp - vm) / (2.0 * h);

      Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
      e[i] = h;
      const Eigen::Vector3d hp =
          z0.inverse().compose(Model::observe(s.compose(CvState<SE2d>::Exp(e)))).Log();
      e[i] = -h;
      const Eigen::Vector3d hm =
          z0.inverse().compose(Model::observe(s.compose(CvState<SE2d>::Exp(e)))).Log();
      Hfd_pose.col(i) = (hp - hm) / (2.0 * h);
    }
    worst = std::max(worst, (Model::jacobian_v() - Vfd).norm() / std::sqrt(3.0));
    worst = std::max(
        worst, (Model::jacobian_h().leftCols<3>() - Hfd_pose).norm() / std::sqrt(3.0));
  }

  return worst <= 1e-5 && seconds_since(t0) < 1.0;
}

// --- criterion 3: exact agreement with a textbook planar filter ------------
namespace planar {

struct State {
  Eigen::Vector4d x;
  Eigen::Matrix4d P;
  double eps;
  std::vector<double> betas;
};

void step(State& s, const std::vector<Eigen::Vector2d>& zs, double dt,
          const Eigen::Matrix4d& Q, const Eigen::Matrix2d& R, double pd, double pg,
          double lambda, double tau_g) {
  Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
  F.topRightCorner<2, 2>() = dt * Eigen::Matrix2d::Identity();
  s.x = F * s.x;
  s.P = F * s.P * F.transpose() + Q;

  Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
  H.leftCols<2>().setIdentity();
  const Eigen::Matrix2d S = R + H * s.P * H.transpose();
  const Eigen::Matrix2d Sinv = S.inverse();

  std::vector<Eigen::Vector2d> nus;
  for (const auto& z : zs) {
    const Eigen::Vector2d nu = z - s.x.head<2>();
    if (nu.dot(Sinv * nu) <= tau_g) nus.push_back(nu);
  }
  const double norm = 1.0 / (2.0 * pi * std::sqrt(S.determinant()));
  std::vector<double> ls;
  double sum_l = 0.0;
  for (const auto& nu : nus) {
    ls.push_back(pd / lambda * norm * std::exp(-0.5 * nu.dot(Sinv * nu)));
    sum_l += ls.back();
  }
  const double denom = 1.0 - pd * pg + sum_l;
  s.betas.assign(1, (1.0 - pd * pg) / denom);
  for (double l : ls) s.betas.push_back(l / denom);

  const double alpha = pd * pg - sum_l;
  s.eps = std::clamp((1.0 - alpha) * s.eps / (1.0 - alpha * s.eps), 1e-12, 1.0 - 1e-12);

  if (!nus.empty()) {
    const Eigen::Matrix<double, 4, 2> K = s.P * H.transpose() * Sinv;
    Eigen::Vector2d nu_bar = Eigen::Vector2d::Zero();
    Eigen::Matrix2d spread = Eigen::Matrix2d::Zero();
    for (size_t j = 0; j < nus.size(); ++j) {
      nu_bar += s.betas[j + 1] * nus[j];
      spread += s.betas[j + 1] * nus[j] * nus[j].transpose();
    }
    spread -= nu_bar * nu_bar.transpose();
    const Eigen::Matrix4d Pc = (Eigen::Matrix4d::Identity() - K * H) * s.P;
    s.P = s.betas[0] * s.P + (1.0 - s.betas[0]) * Pc + K * spread * K.transpose();
    s.P = 0.5 * (s.P + s.P.transpose()).eval();
    s.x += K * nu_bar;
  }
}

}  // namespace planar

bool criterion_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  FilterParams params;
  ModelParams<R2d> model;
  const double dt = 0.1;
  model.q_rate = Eigen::Matrix4d::Identity();
  model.meas_noise = 0.1 * Eigen::Matrix2d::Identity();

  Track<R2d> track;
  const Eigen::Matrix4d P0 = 5.0 * Eigen::Matrix4d::Identity();
  track.belief = {CvState<R2d>(R2d(Eigen::Vector2d::Zero()), Eigen::Vector2d(7.0, 0.0)),
                  P0};
  track.eps = 0.5;
  planar::State ref{Eigen::Vector4d(0.0, 0.0, 7.0, 0.0), P0, 0.5, {}};
  const double tau_g = chi2_inv_cdf(params.p_g, 2);

  std::mt19937_64 rng(303);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> uc(-4.0, 4.0);
  std::uniform_int_distribution<int> unum(0, 3);
  std::bernoulli_distribution detect(0.9);

  Eigen::Vector2d truth(0.0, 0.0);
  double worst = 0.0;
  for (int k = 0; k < 300; ++k) {
    truth += dt * Eigen::Vector2d(7.0, 0.0);
    std::vector<Eigen::Vector2d> zs;
    if (detect(rng)) {
      zs.push_back(truth + std::sqrt(0.1) * Eigen::Vector2d(n01(rng), n01(rng)));
    }
    for (int c = unum(rng); c > 0; --c) {
      zs.push_back(truth + Eigen::Vector2d(uc(rng), uc(rng)));
    }

    track = predict(track, model, dt);
    const auto gate = make_gate(track, model, params);
    Scan<R2d> scan;
    for (const auto& z : zs) scan.measurements.emplace_back(z);
    const auto assoc = association_probabilities(gate, validate(gate, scan), params);
    track = fuse_and_update(track, gate, assoc, params);

    planar::step(ref, zs, dt, dt * Eigen::Matrix4d::Identity(), model.meas_noise,
                 params.p_d, params.p_g, params.lambda, tau_g);

    if (assoc.betas.size() != ref.betas.size()) return false;
    for (size_t j = 0; j < assoc.betas.size(); ++j) {
      worst = std::max(worst, std::abs(assoc.betas[j] - ref.betas[j]));
    }
    Eigen::Vector4d xhat;
    xhat << track.belief.mean().pose().translation(), track.belief.mean().vel();
    worst = std::max(worst, (xhat - ref.x).cwiseAbs().maxCoeff());
    worst = std::max(worst, (track.belief.cov() - ref.P).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(track.eps - ref.eps));
  }
  return worst <= 1e-9 && seconds_since(t0) < 1.0;
}

// --- criterion 4: gate calibration ----------------------------------------
bool criterion_gating() {
  std::mt19937_64 rng(404);
  const Eigen::Matrix3d R = (Eigen::Vector3d(0.1, 0.1, 0.01)).asDiagonal();
  Gate<SE2d> gate;
  gate.z_hat = SE2d::Identity();
  gate.S = R;
  gate.tau_g = chi2_inv_cdf(0.9, 3);
  const LieGaussian<SE2d> noise(SE2d::Identity(), R);
  const Eigen::Matrix3d Sinv = R.inverse();

  const int n = 10000;
  int inside = 0;
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) {
    const auto nu = innovation(gate, noise.sample(rng));
    d2[i] = nu.dot(Sinv * nu);
    if (d2[i] <= gate.tau_g) ++inside;
  }
  const double frequency = double(inside) / n;

  std::sort(d2.begin(), d2.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = chi2_cdf(d2[i], 3);
    ks = std::max(ks,
                  std::max(std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)));
  }
  return std::abs(frequency - 0.9) <= 0.02 && ks < 0.02;
}

// --- criterion 5: association sanity --------------------------------------
bool criterion_association() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> um(0, 9);
  std::uniform_real_distribution<double> up(0.05, 0.99);
  Gate<R2d> gate;
  gate.z_hat = R2d::Identity();
  gate.S = Eigen::Matrix2d::Identity();
  gate.tau_g = 1e9;

  // 10^5 randomized measurement sets split over randomized probabilities.
  for (int trial = 0; trial < 100000; ++trial) {
    FilterParams params;
    params.p_d = up(rng);
    params.p_g = up(rng);
    std::vector<R2d> zs;
    for (int j = um(rng); j > 0; --j) zs.emplace_back(Eigen::Vector2d(u(rng), u(rng)));
    const auto assoc = association_probabilities(gate, zs, params);
    double sum = 0.0;
    for (double b : assoc.betas) {
      if (b < 0.0) return false;
      sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-12) return false;
    if (zs.empty() && std::abs(assoc.betas[0] - 1.0) > 1e-15) return false;
  }

  AssociationResult<SE2d> m0;
  m0.betas = {1.0};
  FilterParams params;  // p_d = p_g = 0.9
  const double eps = track_likelihood_update(0.5, m0, params);
  return std::abs(eps - 0.159664) <= 1e-6;
}

// --- criterion 6: single-measurement posterior mode vs grid MAP -------------
bool criterion_map() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> upos(-5.0, 5.0), uang(-1.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);

  const Eigen::Matrix3d R = (Eigen::Vector3d(0.1, 0.1, 0.01)).asDiagonal();
  const Eigen::Matrix3d Rinv = R.inverse();

  for (int c = 0; c < 10; ++c) {
    const SE2d prior_pose(uang(rng), {upos(rng), upos(rng)});
    Eigen::Matrix<double, 6, 6> P = Eigen::Matrix<double, 6, 6>::Identity();
    P.topLeftCorner<3, 3>() *= 0.5;
    const Eigen::Matrix3d Ppose = P.topLeftCorner<3, 3>();
    const Eigen::Matrix3d Pinv = Ppose.inverse();

    // Measurement drawn from the observation model around the prior mean.
    Eigen::Vector3d r{std::sqrt(R(0, 0)) * n01(rng), std::sqrt(R(1, 1)) * n01(rng),
                      std::sqrt(R(2, 2)) * n01(rng)};
    const SE2d z = prior_pose.compose(SE2d::Exp(r));

    Track<SE2d> track;
    track.belief = {CvState<SE2d>(prior_pose, Eigen::Vector3d::Zero()), P};
    Gate<SE2d> gate;
    gate.z_hat = prior_pose;
    gate.S = R + Ppose;
    const Eigen::Vector3d nu = innovation(gate, z);
    const auto [mu, Pc] = split_update(track, gate, nu);
    const Eigen::Vector3d mode = mu.head<3>();

    // Brute-force MAP of prior(delta) * likelihood(z | delta) over a 41^3
    // tangent grid around the prior mean.
    const double half = 1.0;
    const int n = 41;
    const double h = 2.0 * half / (n - 1);
    double best = -1e300;
    Eigen::Vector3d best_delta = Eigen::Vector3d::Zero();
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) {
        for (int it = 0; it < n; ++it) {
          const Eigen::Vector3d delta{-half + ix * h, -half + iy * h, -half + it * h};
          const SE2d x = prior_pose.compose(SE2d::Exp(delta));
          const Eigen::Vector3d e = x.inverse().compose(z).Log();
          const double logp = -0.5 * delta.dot(Pinv * delta) - 0.5 * e.dot(Rinv * e);
          if (logp > best) {
            best = logp;
            best_delta = delta;
          }
        }
      }
    }
    if ((mode - best_delta).cwiseAbs().maxCoeff() > h) return false;
  }
  return seconds_since(t0) < 30.0;
}

// --- criteria 7 and 8: benchmark table bands and determinism ----------------
struct TableResult {
  std::string csv_no_wall;                  // rows without the timing column
  std::map<std::string, Aggregate> cells;   // "kind/model" -> aggregate
};

TableResult run_table(unsigned seed, int runs) {
  TableResult out;
  BenchConfig config;
  std::ostringstream csv;
  for (auto kind : {TrajectoryKind::kCircular, TrajectoryKind::kZamboni,
                    TrajectoryKind::kSpiral, TrajectoryKind::kStraight}) {
    for (auto model : {ModelKind::kSe2Cv, ModelKind::kLtiCv}) {
      Scenario scenario;
      scenario.kind = kind;
      const auto agg = aggregate_metrics(run_monte_carlo(scenario, model, config, runs, seed));
      const std::string row = csv_row(to_string(kind), model, agg);
      csv << row.substr(0, row.rfind(',')) << "\n";  // drop the wall-clock column
      out.cells[to_string(kind) + "/" + to_string(model)] = agg;
    }
  }
  out.csv_no_wall = csv.str();
  return out;
}

bool criterion_table(const TableResult& table) {
  const auto& c = table.cells;
  const auto tpd = [&](const std::string& k) { return c.at(k).tpd; };
  const auto aee = [&](const std::string& k) { return c.at(k).aee.value_or(1e9); };
  const auto act = [&](const std::string& k) { return c.at(k).act.value_or(1e9); };

  bool ok = tpd("circular/se2cv") >= 0.85;
  ok = ok && tpd("circular/lticv") <= 0.70;
  for (const char* k : {"circular", "zamboni", "spiral", "straight"}) {
    ok = ok && aee(std::string(k) + "/se2cv") <= 0.5;
    ok = ok && act(std::string(k) + "/lticv") < act(std::string(k) + "/se2cv");
  }
  ok = ok && aee("circular/lticv") >= 0.9;
  ok = ok && std::abs(tpd("straight/se2cv") - tpd("straight/lticv")) <= 0.05;
  return ok;
}

bool report(const char* name, bool ok) {
  std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  bool all = true;
  all &= report("1 closed-form group operations are exact", criterion_lie_core());
  all &= report("2 model Jacobians match finite differences", criterion_jacobians());
  all &= report("3 planar reduction equals the textbook filter", criterion_reduction());
  all &= report("4 gate calibration at the 90% threshold", criterion_gating());
  all &= report("5 association probabilities and likelihood update", criterion_association());
  all &= report("6 single-measurement posterior matches grid search", criterion_map());

  const auto table_a = run_table(42, 100);
  all &= report("7 benchmark table within the expected bands", criterion_table(table_a));
  const auto table_b = run_table(42, 100);
  all &= report("8 benchmark table is deterministic",
                table_a.csv_no_wall == table_b.csv_no_wall && !table_a.csv_no_wall.empty());
  return all ? 0 : 1;
}
