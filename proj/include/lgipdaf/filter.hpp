#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lgipdaf/chi2.hpp"
#include "lgipdaf/motion_model.hpp"
#include "lgipdaf/track.hpp"

namespace lgipdaf {

/// Probabilities and thresholds of the association filter.
struct FilterParams {
  double p_d = 0.9;       // probability of detection
  double p_g = 0.9;       // gate probability
  double lambda = 0.01;   // clutter spatial density
  double tau_ct = 0.7;    // confirmation threshold on the track likelihood
  double tau_rt = 0.1;    // rejection threshold on the track likelihood
};

/// Validation region of one track: estimated measurement, innovation
/// covariance, chi-square gate threshold and the gate volume
/// c_m |tau_g S|^{1/2}.
template <typename Group>
struct Gate {
  using MeasMatrix = typename CvModel<Group>::MeasMatrix;

  Group z_hat;
  MeasMatrix S;
  double tau_g = 0.0;
  double volume = 0.0;
  double p_g = 1.0;
};

/// Association event probabilities beta_0..beta_m, the likelihood ratios
/// L_j and the gated innovations.
template <typename Group>
struct AssociationResult {
  std::vector<double> betas;  // index 0 is the all-false event
  std::vector<double> likelihoods;
  std::vector<typename CvModel<Group>::MeasVector> innovations;

  int num_measurements() const { return static_cast<int>(innovations.size()); }
};

/// Volume of the unit hypersphere of dimension m.
inline double unit_sphere_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

/// Propagates belief and track likelihood over dt:
/// x' = f(x, 0, dt), P' = F P F^T + G Q(dt) G^T, eps' = sigma(dt) eps.
template <typename Group>
Track<Group> predict(const Track<Group>& track, const ModelParams<Group>& model,
                     double dt) {
  using Model = CvModel<Group>;
  typename Model::StateMatrix F, G;
  Model::jacobians_f(track.belief.mean(), dt, F, G);
  const typename Model::StateMatrix P =
      F * track.belief.cov() * F.transpose() + G * model.process_noise(dt) * G.transpose();
  Track<Group> out = track;
  out.belief = {Model::transition(track.belief.mean(), dt), P};
  out.eps = model.survival * track.eps;
  return out;
}

/// z_hat = h(x, 0); S = V R V^T + H P H^T; tau_g = chi2_inv_cdf(P_G, m).
template <typename Group>
Gate<Group> make_gate(const Track<Group>& track, const ModelParams<Group>& model,
                      const FilterParams& params) {
  using Model = CvModel<Group>;
  constexpr int m = Model::PoseDim;
  Gate<Group> gate;
  gate.z_hat = Model::observe(track.belief.mean());
  gate.S = model.meas_noise +
           track.belief.cov().template topLeftCorner<m, m>();
  gate.S = 0.5 * (gate.S + gate.S.transpose()).eval();
  Eigen::LLT<typename Model::MeasMatrix> llt(gate.S);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("make_gate: innovation covariance is not PD");
  }
  gate.tau_g = chi2_inv_cdf(params.p_g, m);
  gate.volume = unit_sphere_volume(m) * std::sqrt((gate.tau_g * gate.S).determinant());
  gate.p_g = params.p_g;
  return gate;
}

template <typename Group>
typename CvModel<Group>::MeasVector innovation(const Gate<Group>& gate, const Group& z) {
  return gate.z_hat.inverse().compose(z).Log();
}

/// Keeps the measurements with nu^T S^-1 nu <= tau_g, order preserved.
template <typename Group>
std::vector<Group> validate(const Gate<Group>& gate, const Scan<Group>& scan) {
  const auto Sinv = gate.S.inverse().eval();
  std::vector<Group> validated;
  for (const Group& z : scan.measurements) {
    const auto nu = innovation(gate, z);
    if (nu.dot(Sinv * nu) <= gate.tau_g) validated.push_back(z);
  }
  return validated;
}

/// L_j = (P_D / lambda) N(nu_j; 0, S), beta_0 = (1 - P_G P_D) / c,
/// beta_j = L_j / c with c = 1 - P_D P_G + sum L. The betas sum to one.
template <typename Group>
AssociationResult<Group> association_probabilities(const Gate<Group>& gate,
                                                   const std::vector<Group>& validated,
                                                   const FilterParams& params) {
  using Model = CvModel<Group>;
  constexpr int m = Model::PoseDim;
  AssociationResult<Group> result;
  const auto Sinv = gate.S.inverse().eval();
  const double norm =
      std::pow(2.0 * std::numbers::pi, -0.5 * m) / std::sqrt(gate.S.determinant());
  double sum_l = 0.0;
  for (const Group& z : validated) {
    const auto nu = innovation(gate, z);
    const double density = norm * std::exp(-0.5 * nu.dot(Sinv * nu));
    const double l = params.p_d / params.lambda * density;
    result.innovations.push_back(nu);
    result.likelihoods.push_back(l);
    sum_l += l;
  }
  const double denom = 1.0 - params.p_d * params.p_g + sum_l;
  result.betas.push_back((1.0 - params.p_g * params.p_d) / denom);
  for (double l : result.likelihoods) result.betas.push_back(l / denom);
  return result;
}

/// Error-state update against one innovation: mu = K nu,
/// P^c- = (I - K H) P. The Kalman gain solves S X = (H P^T) instead of
/// forming S^-1.
template <typename Group>
std::pair<typename CvModel<Group>::StateVector, typename CvModel<Group>::StateMatrix>
split_update(const Track<Group>& track, const Gate<Group>& gate,
             const typename CvModel<Group>::MeasVector& nu) {
  using Model = CvModel<Group>;
  const typename Model::MeasJacobian H = Model::jacobian_h();
  const auto& P = track.belief.cov();
  Eigen::LDLT<typename Model::MeasMatrix> ldlt(gate.S);
  const Eigen::Matrix<double, Model::StateDim, Model::PoseDim> K =
      ldlt.solve(H * P.transpose()).transpose();
  typename Model::StateMatrix Pc = (Model::StateMatrix::Identity() - K * H) * P;
  Pc = 0.5 * (Pc + Pc.transpose()).eval();
  return {K * nu, Pc};
}

/// alpha = P_D P_G (m = 0) or P_D P_G - sum L_j; eps' = (1-a) eps / (1 - a eps),
/// clamped away from the absorbing fixed points at 0 and 1.
template <typename Group>
double track_likelihood_update(double eps_pred, const AssociationResult<Group>& assoc,
                               const FilterParams& params) {
  double alpha = params.p_d * params.p_g;
  for (double l : assoc.likelihoods) alpha -= l;
  double eps = (1.0 - alpha) * eps_pred / (1.0 - alpha * eps_pred);
  return std::clamp(eps, 1e-12, 1.0 - 1e-12);
}

/// Full split-track fusion: the association-weighted innovation drives a
/// single gain update, the covariance mixes the predicted and updated
/// covariances plus the spread-of-the-means term, and the mean reset
/// transports the covariance with the right Jacobian.
template <typename Group>
Track<Group> fuse_and_update(const Track<Group>& track, const Gate<Group>& gate,
                             const AssociationResult<Group>& assoc,
                             const FilterParams& params) {
  using Model = CvModel<Group>;
  Track<Group> out = track;
  out.eps = track_likelihood_update(track.eps, assoc, params);
  const int m = assoc.num_measurements();
  if (m == 0) return out;

  typename Model::MeasVector nu_bar = Model::MeasVector::Zero();
  typename Model::MeasMatrix spread = Model::MeasMatrix::Zero();
  for (int j = 0; j < m; ++j) {
    nu_bar += assoc.betas[j + 1] * assoc.innovations[j];
    spread += assoc.betas[j + 1] * assoc.innovations[j] * assoc.innovations[j].transpose();
  }
  spread -= nu_bar * nu_bar.transpose();
  // Clamp arithmetic-noise negative eigenvalues so the spread term stays PSD.
  Eigen::SelfAdjointEigenSolver<typename Model::MeasMatrix> es(spread);
  if (es.eigenvalues().minCoeff() < 0.0) {
    spread = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
             es.eigenvectors().transpose();
  }

  const typename Model::MeasJacobian H = Model::jacobian_h();
  const auto& P = track.belief.cov();
  Eigen::LDLT<typename Model::MeasMatrix> ldlt(gate.S);
  const Eigen::Matrix<double, Model::StateDim, Model::PoseDim> K =
      ldlt.solve(H * P.transpose()).transpose();

  const typename Model::StateVector mu = K * nu_bar;
  typename Model::StateMatrix Pc = (Model::StateMatrix::Identity() - K * H) * P;
  const double beta0 = assoc.betas[0];
  typename Model::StateMatrix P_minus =
      beta0 * P + (1.0 - beta0) * Pc + K * spread * K.transpose();
  P_minus = 0.5 * (P_minus + P_minus.transpose()).eval();

  out.belief = LieGaussian<CvState<Group>>(track.belief.mean(), P_minus).reset_mean(mu);
  return out;
}

}  // namespace lgipdaf
