#pragma once

#include <Eigen/Dense>

namespace lgipdaf {

/// Direct product G x R^dim(G) carrying a pose and a body-frame velocity.
/// The second factor is abelian, so Exp/Log act componentwise with the
/// velocity identity-mapped, and the right Jacobian is blkdiag(J_r^G, I).
template <typename Group>
class CvState {
 public:
  static constexpr int PoseDim = Group::Dim;
  static constexpr int Dim = 2 * Group::Dim;
  using TangentVector = Eigen::Matrix<double, Dim, 1>;
  using SquareMatrix = Eigen::Matrix<double, Dim, Dim>;
  using PoseTangent = typename Group::TangentVector;

  CvState() : pose_(Group::Identity()), vel_(PoseTangent::Zero()) {}
  CvState(const Group& pose, const PoseTangent& vel) : pose_(pose), vel_(vel) {}

  static CvState Identity() { return CvState(); }

  const Group& pose() const { return pose_; }
  const PoseTangent& vel() const { return vel_; }

  CvState compose(const CvState& other) const {
    return CvState(pose_.compose(other.pose_), vel_ + other.vel_);
  }

  CvState inverse() const { return CvState(pose_.inverse(), -vel_); }

  static CvState Exp(const TangentVector& u) {
    return CvState(Group::Exp(u.template head<PoseDim>()), u.template tail<PoseDim>());
  }

  TangentVector Log() const {
    TangentVector u;
    u.template head<PoseDim>() = pose_.Log();
    u.template tail<PoseDim>() = vel_;
    return u;
  }

  SquareMatrix adjoint() const {
    SquareMatrix A = SquareMatrix::Identity();
    A.template topLeftCorner<PoseDim, PoseDim>() = pose_.adjoint();
    return A;
  }

  static SquareMatrix RightJacobian(const TangentVector& u) {
    SquareMatrix J = SquareMatrix::Identity();
    J.template topLeftCorner<PoseDim, PoseDim>() =
        Group::RightJacobian(u.template head<PoseDim>());
    return J;
  }

  static SquareMatrix RightJacobianInverse(const TangentVector& u) {
    SquareMatrix J = SquareMatrix::Identity();
    J.template topLeftCorner<PoseDim, PoseDim>() =
        Group::RightJacobianInverse(u.template head<PoseDim>());
    return J;
  }

 private:
  Group pose_;
  PoseTangent vel_;
};

}  // namespace lgipdaf
