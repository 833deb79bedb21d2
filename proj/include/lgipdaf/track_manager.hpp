#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "lgipdaf/filter.hpp"

namespace lgipdaf {

/// Track lifecycle settings. Two unassociated measurements a scan apart
/// seed a new track when their positional distance is within
/// (v_max + 3 sigma_meas) * dt.
struct ManagerParams {
  double init_eps = 0.2;
  double init_cov = 5.0;  // P0 = init_cov * I
  double v_max = 15.0;    // m/s bound used by the pairing threshold
};

/// Seeds a track from two unassociated measurements: pose from the newer
/// one, velocity from the geodesic between them divided by the time gap.
template <typename Group>
Track<Group> init_track(const Group& z_new, const Group& z_old, double t_new,
                        double t_old,
                        const typename CvModel<Group>::StateMatrix& init_cov,
                        double init_eps) {
  if (t_new <= t_old) throw std::invalid_argument("init_track: t_new must exceed t_old");
  const typename Group::TangentVector vel =
      z_old.inverse().compose(z_new).Log() / (t_new - t_old);
  Track<Group> track;
  track.belief = {CvState<Group>(z_new, vel), init_cov};
  track.eps = init_eps;
  track.consensus = {{t_old, z_old}, {t_new, z_new}};
  return track;
}

/// Measurement routing result: one validated list per track plus the pool
/// of measurements that fell in no gate.
template <typename Group>
struct RoutedScan {
  std::vector<std::vector<Group>> per_track;
  std::vector<Group> pool;
};

/// Copies each measurement into every track whose gate contains it;
/// measurements inside no gate go to the unassociated pool.
template <typename Group>
RoutedScan<Group> route_scan(const std::vector<Track<Group>>& tracks,
                             const std::vector<Gate<Group>>& gates,
                             const Scan<Group>& scan) {
  RoutedScan<Group> routed;
  routed.per_track.resize(tracks.size());
  std::vector<typename CvModel<Group>::MeasMatrix> s_inv;
  s_inv.reserve(gates.size());
  for (const auto& gate : gates) s_inv.push_back(gate.S.inverse());
  for (const Group& z : scan.measurements) {
    bool associated = false;
    for (size_t i = 0; i < gates.size(); ++i) {
      const auto nu = innovation(gates[i], z);
      if (nu.dot(s_inv[i] * nu) <= gates[i].tau_g) {
        routed.per_track[i].push_back(z);
        associated = true;
      }
    }
    if (!associated) routed.pool.push_back(z);
  }
  return routed;
}

/// Applies the confirmation/rejection thresholds. Rejected tracks are
/// pruned; newly confirmed tracks get the next label.
template <typename Group>
void lifecycle_step(std::vector<Track<Group>>& tracks, const FilterParams& params,
                    int& next_label) {
  for (auto& track : tracks) {
    if (track.eps < params.tau_rt) {
      track.status = TrackStatus::kRejected;
    } else if (track.eps > params.tau_ct && track.status == TrackStatus::kTentative) {
      track.status = TrackStatus::kConfirmed;
      track.label = next_label++;
    }
  }
  std::erase_if(tracks, [](const Track<Group>& t) { return t.status == TrackStatus::kRejected; });
}

/// Runs the full per-scan cycle for a set of tracks: predict, gate,
/// route, per-track association and update, lifecycle, and pool-pair
/// track initialization against the previous scan's leftovers.
template <typename Group>
class TrackManager {
 public:
  TrackManager(const ModelParams<Group>& model, const FilterParams& filter,
               const ManagerParams& manager)
      : model_(model), filter_(filter), manager_(manager) {}

  const std::vector<Track<Group>>& tracks() const { return tracks_; }
  int labels_issued() const { return next_label_; }

  void step(const Scan<Group>& scan) {
    const double dt = have_time_ ? scan.time - last_time_ : 0.0;
    if (dt < 0.0) throw std::invalid_argument("TrackManager::step: time went backwards");

    std::vector<Gate<Group>> gates;
    gates.reserve(tracks_.size());
    for (auto& track : tracks_) {
      if (have_time_) track = predict(track, model_, dt);
      gates.push_back(make_gate(track, model_, filter_));
    }

    auto routed = route_scan(tracks_, gates, scan);
    for (size_t i = 0; i < tracks_.size(); ++i) {
      const auto assoc = association_probabilities(gates[i], routed.per_track[i], filter_);
      tracks_[i] = fuse_and_update(tracks_[i], gates[i], assoc, filter_);
      for (const Group& z : routed.per_track[i]) {
        tracks_[i].consensus.emplace_back(scan.time, z);
      }
    }

    lifecycle_step(tracks_, filter_, next_label_);
    initialize_from_pool(routed.pool, scan.time, dt);

    pool_ = std::move(routed.pool);
    pool_time_ = scan.time;
    last_time_ = scan.time;
    have_time_ = true;
  }

 private:
  void initialize_from_pool(std::vector<Group>& current_pool, double time, double dt) {
    if (!have_time_ || pool_.empty() || dt <= 0.0) return;
    const double sigma = std::sqrt(model_.meas_noise(0, 0));
    const double threshold = (manager_.v_max + 3.0 * sigma) * dt;
    std::vector<bool> used_old(pool_.size(), false);
    std::vector<Group> unpaired;
    for (const Group& z_new : current_pool) {
      bool paired = false;
      for (size_t i = 0; i < pool_.size(); ++i) {
        if (used_old[i]) continue;
        const auto d = z_new.translation() - pool_[i].translation();
        if (d.norm() <= threshold) {
          tracks_.push_back(init_track(z_new, pool_[i], time, pool_time_,
                                       init_covariance(), manager_.init_eps));
          used_old[i] = true;
          paired = true;
          break;
        }
      }
      if (!paired) unpaired.push_back(z_new);
    }
    // Pairs consume their measurements; only unpaired ones stay poolable.
    current_pool = std::move(unpaired);
  }

  typename CvModel<Group>::StateMatrix init_covariance() const {
    return manager_.init_cov * CvModel<Group>::StateMatrix::Identity();
  }

  ModelParams<Group> model_;
  FilterParams filter_;
  ManagerParams manager_;
  std::vector<Track<Group>> tracks_;
  std::vector<Group> pool_;
  double pool_time_ = 0.0;
  double last_time_ = 0.0;
  bool have_time_ = false;
  int next_label_ = 0;
};

}  // namespace lgipdaf
