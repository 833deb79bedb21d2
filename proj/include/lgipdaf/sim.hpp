#pragma once

#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lgipdaf/lie/rn.hpp"
#include "lgipdaf/lie/se2.hpp"
#include "lgipdaf/motion_model.hpp"
#include "lgipdaf/track.hpp"

namespace lgipdaf {

enum class TrajectoryKind { kCircular, kZamboni, kSpiral, kStraight };

inline TrajectoryKind trajectory_kind_from_string(const std::string& s) {
  if (s == "circular") return TrajectoryKind::kCircular;
  if (s == "zamboni") return TrajectoryKind::kZamboni;
  if (s == "spiral") return TrajectoryKind::kSpiral;
  if (s == "straight") return TrajectoryKind::kStraight;
  throw std::invalid_argument("unknown trajectory kind: " + s);
}

inline std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kCircular: return "circular";
    case TrajectoryKind::kZamboni: return "zamboni";
    case TrajectoryKind::kSpiral: return "spiral";
    case TrajectoryKind::kStraight: return "straight";
  }
  return "?";
}

/// Surveillance setup: target trajectory, sensor noise, detection
/// probability and uniform Poisson clutter over the region.
struct Scenario {
  TrajectoryKind kind = TrajectoryKind::kCircular;
  double duration = 30.0;
  double dt = 0.1;
  Eigen::Vector4d region{-70.0, 70.0, -70.0, 70.0};  // [xmin, xmax, ymin, ymax]
  double clutter_lambda = 0.01;
  double p_d = 0.9;
  Eigen::Vector3d r_diag{0.1, 0.1, 0.01};
  unsigned seed = 0;

  int num_steps() const { return static_cast<int>(std::lround(duration / dt)); }
  double region_area() const { return (region[1] - region[0]) * (region[3] - region[2]); }
};

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.kind = trajectory_kind_from_string(j.at("kind").get<std::string>());
  s.duration = j.at("duration_s").get<double>();
  s.dt = j.at("dt_s").get<double>();
  const auto region = j.at("region_m").get<std::vector<double>>();
  if (region.size() != 4) throw std::invalid_argument("region_m must hold [xmin, xmax, ymin, ymax]");
  s.region = Eigen::Vector4d(region[0], region[1], region[2], region[3]);
  s.clutter_lambda = j.at("lambda").get<double>();
  s.p_d = j.at("p_d").get<double>();
  const auto r = j.at("r_diag").get<std::vector<double>>();
  if (r.size() != 3) throw std::invalid_argument("r_diag must hold three entries");
  s.r_diag = Eigen::Vector3d(r[0], r[1], r[2]);
  s.seed = j.value("seed", 0u);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  return scenario_from_json(j);
}

/// Body-frame twist [vx, vy, omega] scheduled at time t.
inline Eigen::Vector3d scheduled_twist(TrajectoryKind kind, double t) {
  switch (kind) {
    case TrajectoryKind::kCircular:
      return {10.0, 0.0, 1.0};
    case TrajectoryKind::kZamboni: {
      // Repeating lap: 4 s straight, half-turn at 1.5 rad/s, 4 s straight,
      // half-turn, at 10 m/s throughout.
      const double turn = std::numbers::pi / 1.5;
      const double cycle = 2.0 * (4.0 + turn);
      double u = std::fmod(t, cycle);
      if (u < 4.0) return {10.0, 0.0, 0.0};
      if (u < 4.0 + turn) return {10.0, 0.0, 1.5};
      if (u < 8.0 + turn) return {10.0, 0.0, 0.0};
      return {10.0, 0.0, 1.5};
    }
    case TrajectoryKind::kSpiral:
      return {2.0 + 8.0 * t / 30.0, 0.0, 1.0};
    case TrajectoryKind::kStraight:
      return {7.0, 0.0, 0.0};
  }
  throw std::invalid_argument("scheduled_twist: unknown trajectory kind");
}

inline SE2d start_pose(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kCircular: return {0.0, {0.0, -10.0}};
    case TrajectoryKind::kZamboni: return {0.0, {-30.0, -30.0}};
    case TrajectoryKind::kSpiral: return {0.0, {0.0, -5.0}};
    case TrajectoryKind::kStraight: return {0.0, {-50.0, 0.0}};
  }
  return SE2d::Identity();
}

/// Ground truth at t = i * dt from exact piecewise-constant-twist Exp
/// steps; the velocity is set from the schedule, never integrated.
inline std::vector<CvState<SE2d>> truth_trajectory(const Scenario& scenario) {
  std::vector<CvState<SE2d>> states;
  const int n = scenario.num_steps();
  states.reserve(n + 1);
  SE2d pose = start_pose(scenario.kind);
  states.emplace_back(pose, scheduled_twist(scenario.kind, 0.0));
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d twist = scheduled_twist(scenario.kind, i * scenario.dt);
    pose = pose.compose(SE2d::Exp(scenario.dt * twist));
    states.emplace_back(pose, scheduled_twist(scenario.kind, (i + 1) * scenario.dt));
  }
  return states;
}

inline CvState<SE2d> trajectory(TrajectoryKind kind, double t, double dt = 0.1) {
  Scenario s;
  s.kind = kind;
  s.duration = t;
  s.dt = dt;
  return truth_trajectory(s).back();
}

/// Measurement-space hooks per group: clutter generation, the view of a
/// truth pose, and the measurement noise sub-block.
template <typename Group>
struct SensorSpace;

template <>
struct SensorSpace<SE2d> {
  static Eigen::Matrix3d noise_cov(const Scenario& s) { return s.r_diag.asDiagonal(); }
  static SE2d project_truth(const CvState<SE2d>& truth) { return truth.pose(); }
  template <typename Rng>
  static SE2d clutter(const Scenario& s, Rng& rng) {
    std::uniform_real_distribution<double> ux(s.region[0], s.region[1]);
    std::uniform_real_distribution<double> uy(s.region[2], s.region[3]);
    std::uniform_real_distribution<double> uth(-std::numbers::pi, std::numbers::pi);
    const double x = ux(rng), y = uy(rng), th = uth(rng);
    return {th, {x, y}};
  }
};

template <>
struct SensorSpace<R2d> {
  static Eigen::Matrix2d noise_cov(const Scenario& s) {
    return s.r_diag.head<2>().asDiagonal();
  }
  static R2d project_truth(const CvState<SE2d>& truth) {
    return R2d(truth.pose().translation());
  }
  template <typename Rng>
  static R2d clutter(const Scenario& s, Rng& rng) {
    std::uniform_real_distribution<double> ux(s.region[0], s.region[1]);
    std::uniform_real_distribution<double> uy(s.region[2], s.region[3]);
    const double x = ux(rng), y = uy(rng);
    return R2d(Eigen::Vector2d(x, y));
  }
};

/// Poisson(lambda * area) clutter, uniform over the region.
template <typename Group, typename Rng>
std::vector<Group> sample_clutter(const Scenario& scenario, Rng& rng) {
  std::vector<Group> clutter;
  const double mean = scenario.clutter_lambda * scenario.region_area();
  if (mean <= 0.0) return clutter;
  std::poisson_distribution<int> count(mean);
  const int n = count(rng);
  clutter.reserve(n);
  for (int i = 0; i < n; ++i) clutter.push_back(SensorSpace<Group>::clutter(scenario, rng));
  return clutter;
}

/// One sensor sweep: the target measurement with probability p_d, plus
/// clutter, shuffled. truth_index tracks the target measurement.
template <typename Group, typename Rng>
Scan<Group> sense(const CvState<SE2d>& truth, double time, const Scenario& scenario,
                  Rng& rng) {
  Scan<Group> scan;
  scan.time = time;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (u01(rng) < scenario.p_d) {
    const auto R = SensorSpace<Group>::noise_cov(scenario);
    LieGaussian<Group> noise(SensorSpace<Group>::project_truth(truth), R);
    scan.measurements.push_back(noise.sample(rng));
    scan.truth_index = 0;
  }
  for (auto& z : sample_clutter<Group>(scenario, rng)) scan.measurements.push_back(std::move(z));

  // Fisher-Yates over indices so truth_index follows the shuffle.
  for (int i = static_cast<int>(scan.measurements.size()) - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    const int j = pick(rng);
    if (j == i) continue;
    std::swap(scan.measurements[i], scan.measurements[j]);
    if (scan.truth_index == i) scan.truth_index = j;
    else if (scan.truth_index == j) scan.truth_index = i;
  }
  return scan;
}

}  // namespace lgipdaf
