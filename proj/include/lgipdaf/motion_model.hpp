#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "lgipdaf/lie/cv_state.hpp"

namespace lgipdaf {

/// Constant-velocity white-noise-driven model on G x R^dim(G).
/// The pose itself is observed, so the measurement group is G; with
/// G = R^2 this is exactly the textbook position-only LTI-CV model.
template <typename Group>
struct CvModel {
  using State = CvState<Group>;
  using Meas = Group;
  static constexpr int PoseDim = Group::Dim;
  static constexpr int StateDim = 2 * Group::Dim;

  using StateVector = Eigen::Matrix<double, StateDim, 1>;
  using StateMatrix = Eigen::Matrix<double, StateDim, StateDim>;
  using MeasVector = Eigen::Matrix<double, PoseDim, 1>;
  using MeasMatrix = Eigen::Matrix<double, PoseDim, PoseDim>;
  using MeasJacobian = Eigen::Matrix<double, PoseDim, StateDim>;

  /// pose' = pose Exp(dt v + q_g), vel' = vel + q_v.
  static State transition(const State& s, const StateVector& q, double dt) {
    if (dt < 0.0) throw std::invalid_argument("CvModel::transition: negative dt");
    const MeasVector u = dt * s.vel() + q.template head<PoseDim>();
    return State(s.pose().compose(Group::Exp(u)), s.vel() + q.template tail<PoseDim>());
  }

  static State transition(const State& s, double dt) {
    return transition(s, StateVector::Zero(), dt);
  }

  /// z = pose Exp(r).
  static Meas observe(const State& s, const MeasVector& r) {
    return s.pose().compose(Group::Exp(r));
  }

  static Meas observe(const State& s) { return s.pose(); }

  /// F = [[Ad_{Exp(dt v)^-1}, J_r(dt v) dt], [0, I]],
  /// G = [[J_r(dt v), 0], [0, I]], both evaluated at (s, q=0, dt).
  static void jacobians_f(const State& s, double dt, StateMatrix& F, StateMatrix& G) {
    const MeasVector u = dt * s.vel();
    const MeasMatrix Jr = Group::RightJacobian(u);
    F = StateMatrix::Identity();
    F.template topLeftCorner<PoseDim, PoseDim>() = Group::Exp(u).inverse().adjoint();
    F.template topRightCorner<PoseDim, PoseDim>() = Jr * dt;
    G = StateMatrix::Identity();
    G.template topLeftCorner<PoseDim, PoseDim>() = Jr;
  }

  /// H = [I 0] selects the pose block; V = I.
  static MeasJacobian jacobian_h() {
    MeasJacobian H = MeasJacobian::Zero();
    H.template leftCols<PoseDim>() = MeasMatrix::Identity();
    return H;
  }

  static MeasMatrix jacobian_v() { return MeasMatrix::Identity(); }
};

/// Noise and survival parameters of the model. Q(dt) = q_rate * dt.
template <typename Group>
struct ModelParams {
  typename CvModel<Group>::StateMatrix q_rate;
  typename CvModel<Group>::MeasMatrix meas_noise;
  double survival = 1.0;  // sigma(dt), constant in this implementation

  typename CvModel<Group>::StateMatrix process_noise(double dt) const { return q_rate * dt; }
};

}  // namespace lgipdaf
