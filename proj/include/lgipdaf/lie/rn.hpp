#pragma once

#include <Eigen/Dense>

namespace lgipdaf {

/// The abelian translation group R^n. Exp and Log are the identity map,
/// the adjoint is the identity matrix and ad vanishes.
template <int N, typename Scalar = double>
class Rn {
 public:
  static constexpr int Dim = N;
  using TangentVector = Eigen::Matrix<Scalar, N, 1>;
  using SquareMatrix = Eigen::Matrix<Scalar, N, N>;
  using Translation = TangentVector;

  Rn() : value_(TangentVector::Zero()) {}
  explicit Rn(const TangentVector& value) : value_(value) {}

  static Rn Identity() { return Rn(); }

  const TangentVector& translation() const { return value_; }

  Rn compose(const Rn& other) const { return Rn(value_ + other.value_); }
  Rn inverse() const { return Rn(-value_); }

  static Rn Exp(const TangentVector& v) { return Rn(v); }
  TangentVector Log() const { return value_; }

  SquareMatrix adjoint() const { return SquareMatrix::Identity(); }
  static SquareMatrix ad(const TangentVector&) { return SquareMatrix::Zero(); }

  static SquareMatrix RightJacobian(const TangentVector&) { return SquareMatrix::Identity(); }
  static SquareMatrix RightJacobianInverse(const TangentVector&) { return SquareMatrix::Identity(); }
  static SquareMatrix LeftJacobian(const TangentVector&) { return SquareMatrix::Identity(); }
  static SquareMatrix LeftJacobianInverse(const TangentVector&) { return SquareMatrix::Identity(); }

 private:
  TangentVector value_;
};

using R2d = Rn<2, double>;

}  // namespace lgipdaf
