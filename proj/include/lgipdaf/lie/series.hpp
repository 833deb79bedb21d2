#pragma once

#include <Eigen/Dense>

namespace lgipdaf {

/// Right Jacobian from its defining series sum_n (-ad)^n / (n+1)!.
/// Used for groups without a closed form, truncated when the term norm
/// drops below 1e-14 or after max_terms, whichever comes first.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>
right_jacobian_series(const Eigen::MatrixBase<Derived>& ad, int max_terms = 40) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>;
  Mat minus_ad = -ad;
  Mat term = Mat::Identity(ad.rows(), ad.cols());
  Mat sum = term;  // n = 0 term: I / 1!
  for (int n = 1; n < max_terms; ++n) {
    term = (term * minus_ad) / Scalar(n + 1);
    sum += term;
    if (term.norm() < Scalar(1e-14)) break;
  }
  return sum;
}

}  // namespace lgipdaf
