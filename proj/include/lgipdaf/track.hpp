#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lgipdaf/gaussian.hpp"
#include "lgipdaf/lie/cv_state.hpp"

namespace lgipdaf {

enum class TrackStatus { kTentative, kConfirmed, kRejected };

/// A track: state belief, track likelihood epsilon, the consensus set of
/// associated measurements, and the lifecycle label/status.
template <typename Group>
struct Track {
  using State = CvState<Group>;
  using Belief = LieGaussian<State>;

  Belief belief;
  double eps = 0.5;
  std::vector<std::pair<double, Group>> consensus;
  std::optional<int> label;
  TrackStatus status = TrackStatus::kTentative;
};

/// A timestamped sensor sweep. truth_index marks the target-originated
/// measurement when the simulator knows it; it is absent for real data
/// and is never visible to the filter.
template <typename Group>
struct Scan {
  double time = 0.0;
  std::vector<Group> measurements;
  std::optional<int> truth_index;
};

}  // namespace lgipdaf
