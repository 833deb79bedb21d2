#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace lgipdaf {

/// Wraps an angle to the principal branch (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar theta) {
  Scalar w = std::remainder(theta, Scalar(2) * std::numbers::pi_v<Scalar>);
  if (w <= -std::numbers::pi_v<Scalar>) w += Scalar(2) * std::numbers::pi_v<Scalar>;
  return w;
}

/// Planar rigid transformation. Stored as a heading angle in (-pi, pi]
/// and a translation; the rotation matrix is built on demand.
///
/// Tangent coordinates are ordered [rho_x, rho_y, omega].
template <typename Scalar>
class SE2 {
 public:
  static constexpr int Dim = 3;
  using TangentVector = Eigen::Matrix<Scalar, 3, 1>;
  using SquareMatrix = Eigen::Matrix<Scalar, 3, 3>;
  using Translation = Eigen::Matrix<Scalar, 2, 1>;

  SE2() : theta_(0), p_(Translation::Zero()) {}
  SE2(Scalar theta, const Translation& p) : theta_(wrap_angle(theta)), p_(p) {}

  static SE2 Identity() { return SE2(); }

  Scalar angle() const { return theta_; }
  const Translation& translation() const { return p_; }

  Eigen::Matrix<Scalar, 2, 2> rotation() const {
    const Scalar c = std::cos(theta_), s = std::sin(theta_);
    return (Eigen::Matrix<Scalar, 2, 2>() << c, -s, s, c).finished();
  }

  SE2 compose(const SE2& other) const {
    return SE2(theta_ + other.theta_, p_ + rotation() * other.p_);
  }

  SE2 inverse() const {
    const Scalar c = std::cos(theta_), s = std::sin(theta_);
    Eigen::Matrix<Scalar, 2, 2> Rt;
    Rt << c, s, -s, c;
    return SE2(-theta_, -(Rt * p_));
  }

  static SE2 Exp(const TangentVector& v) {
    const Scalar omega = v[2];
    return SE2(omega, left_block_d(omega) * v.template head<2>());
  }

  TangentVector Log() const {
    TangentVector v;
    v[2] = theta_;
    v.template head<2>() = d_inverse(theta_) * p_;
    return v;
  }

  /// Ad_g = [[R, -[1]x p], [0, 1]] acting on tangent coordinates.
  SquareMatrix adjoint() const {
    SquareMatrix A = SquareMatrix::Identity();
    A.template topLeftCorner<2, 2>() = rotation();
    A(0, 2) = p_[1];
    A(1, 2) = -p_[0];
    return A;
  }

  /// ad_v = [[ [omega]x, -[1]x rho ], [0, 0]].
  static SquareMatrix ad(const TangentVector& v) {
    SquareMatrix A = SquareMatrix::Zero();
    A(0, 1) = -v[2];
    A(1, 0) = v[2];
    A(0, 2) = v[1];
    A(1, 2) = -v[0];
    return A;
  }

  static SquareMatrix RightJacobian(const TangentVector& v) {
    const Scalar omega = v[2];
    SquareMatrix J = SquareMatrix::Identity();
    J.template topLeftCorner<2, 2>() = w_r(omega);
    J.template topRightCorner<2, 1>() = d_r(omega) * v.template head<2>();
    return J;
  }

  static SquareMatrix RightJacobianInverse(const TangentVector& v) {
    return RightJacobian(v).inverse();
  }

  static SquareMatrix LeftJacobian(const TangentVector& v) {
    return RightJacobian(TangentVector(-v));
  }

  static SquareMatrix LeftJacobianInverse(const TangentVector& v) {
    return LeftJacobian(v).inverse();
  }

 private:
  // Threshold below which 4th-order Taylor forms of D, D^-1, W_r, D_r
  // replace the trigonometric expressions; the exact forms lose precision
  // there through 1 - cos cancellation.
  static constexpr Scalar kSmallAngle = Scalar(1e-2);

  static Eigen::Matrix<Scalar, 2, 2> skew_blend(Scalar a, Scalar b) {
    // a*I + b*[1]x
    return (Eigen::Matrix<Scalar, 2, 2>() << a, -b, b, a).finished();
  }

  // D(omega) = sin(w)/w I + (1-cos(w))/w [1]x
  static Eigen::Matrix<Scalar, 2, 2> left_block_d(Scalar w) {
    if (std::abs(w) < kSmallAngle) {
      const Scalar w2 = w * w;
      return skew_blend(Scalar(1) - w2 / Scalar(6) + w2 * w2 / Scalar(120),
                        w / Scalar(2) - w * w2 / Scalar(24));
    }
    return skew_blend(std::sin(w) / w, (Scalar(1) - std::cos(w)) / w);
  }

  // D^-1(theta) = theta sin(theta)/(2(1-cos(theta))) I - theta/2 [1]x
  static Eigen::Matrix<Scalar, 2, 2> d_inverse(Scalar th) {
    if (std::abs(th) < kSmallAngle) {
      const Scalar t2 = th * th;
      return skew_blend(Scalar(1) - t2 / Scalar(12) - t2 * t2 / Scalar(720),
                        -th / Scalar(2));
    }
    const Scalar a = th * std::sin(th) / (Scalar(2) * (Scalar(1) - std::cos(th)));
    return skew_blend(a, -th / Scalar(2));
  }

  // W_r(omega) = sin(w)/w I + (cos(w)-1)/w [1]x
  static Eigen::Matrix<Scalar, 2, 2> w_r(Scalar w) {
    if (std::abs(w) < kSmallAngle) {
      const Scalar w2 = w * w;
      return skew_blend(Scalar(1) - w2 / Scalar(6) + w2 * w2 / Scalar(120),
                        -w / Scalar(2) + w * w2 / Scalar(24));
    }
    return skew_blend(std::sin(w) / w, (std::cos(w) - Scalar(1)) / w);
  }

  // D_r(omega) = (w - sin(w))/w^2 I + (1-cos(w))/w^2 [1]x
  static Eigen::Matrix<Scalar, 2, 2> d_r(Scalar w) {
    if (std::abs(w) < kSmallAngle) {
      const Scalar w2 = w * w;
      return skew_blend(w / Scalar(6) - w * w2 / Scalar(120),
                        Scalar(0.5) - w2 / Scalar(24) + w2 * w2 / Scalar(720));
    }
    const Scalar w2 = w * w;
    return skew_blend((w - std::sin(w)) / w2, (Scalar(1) - std::cos(w)) / w2);
  }

  Scalar theta_;
  Translation p_;
};

using SE2d = SE2<double>;

}  // namespace lgipdaf
