#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace lgipdaf {

/// Concentrated Gaussian on a Lie group: a Gaussian over the tangent
/// space at the mean, pushed onto the group by Exp. The covariance is
/// kept symmetric and is expressed in tangent coordinates at the mean.
template <typename Group>
class LieGaussian {
 public:
  static constexpr int Dim = Group::Dim;
  using Vector = Eigen::Matrix<double, Dim, 1>;
  using Matrix = Eigen::Matrix<double, Dim, Dim>;

  LieGaussian() : mean_(Group::Identity()), cov_(Matrix::Zero()) {}
  LieGaussian(const Group& mean, const Matrix& cov)
      : mean_(mean), cov_(0.5 * (cov + cov.transpose())) {}

  const Group& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  /// eta * exp(-1/2 Log(mean^-1 x)^T P^-1 Log(mean^-1 x))
  double density(const Group& x) const {
    Eigen::LDLT<Matrix> ldlt(cov_);
    const double det = cov_.determinant();
    if (ldlt.info() != Eigen::Success || !(det > 0.0)) {
      throw std::runtime_error("LieGaussian::density: singular covariance");
    }
    const Vector e = mean_.inverse().compose(x).Log();
    const double quad = e.dot(ldlt.solve(e));
    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * Dim) / std::sqrt(det);
    return norm * std::exp(-0.5 * quad);
  }

  /// mean * Exp(L xi) with xi standard normal and L L^T = cov.
  template <typename Rng>
  Group sample(Rng& rng) const {
    const Matrix L = factor();
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector xi;
    for (int i = 0; i < Dim; ++i) xi[i] = n01(rng);
    return mean_.compose(Group::Exp(L * xi));
  }

  /// Shifts the mean along the geodesic Exp(mu) and transports the
  /// covariance with the right Jacobian: P' = J_r(mu) P J_r(mu)^T.
  LieGaussian reset_mean(const Vector& mu) const {
    const Matrix J = Group::RightJacobian(mu);
    return LieGaussian(mean_.compose(Group::Exp(mu)), J * cov_ * J.transpose());
  }

 private:
  // Cholesky when possible, eigendecomposition with clamped negative
  // eigenvalues when the covariance is only numerically PSD.
  Matrix factor() const {
    Eigen::LLT<Matrix> llt(cov_);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov_);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw std::runtime_error("LieGaussian::sample: covariance is not PSD");
    }
    Vector lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
  }

  Group mean_;
  Matrix cov_;
};

}  // namespace lgipdaf
