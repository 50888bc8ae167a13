#ifndef BOED_STATIONARY_HPP
#define BOED_STATIONARY_HPP

#include <optional>
#include <vector>

#include "boed/model.hpp"

namespace boed {

/// One measurement update of the Kalman filter.  `predicted` is the
/// one-step-ahead belief the update consumed, `posterior` the filtered
/// belief, `gain` the Kalman gain and `innovation_cov` S = H Sigma H^T + R.
struct FilterStep {
  GaussianBelief predicted;
  GaussianBelief posterior;
  Matrix gain;
  Matrix innovation_cov;
};

/// Time update: N(A mu, A Sigma A^T + Q).
GaussianBelief predict(const LtiModel& model, const GaussianBelief& belief);

/// Measurement update from the predictive belief (the caller applies the
/// predict step; see filter_trajectory for the fold).  Linear solves go
/// through a Cholesky factorization of S, never an explicit inverse.
FilterStep kalman_step(const LtiModel& model, const GaussianBelief& prior,
                       const Vector& y);

/// Folds predict + kalman_step over the observations, starting from
/// model.init as the time-(t-1) posterior.
std::vector<FilterStep> filter_trajectory(const LtiModel& model,
                                          const std::vector<Vector>& ys);

/// Solves Sigma = A Sigma A^T + Q by the doubling (Smith) iteration.
/// Requires rho(A) < 1 - 1e-8 and Q PSD; the result satisfies the fixed
/// point with residual < 1e-9 * (1 + ||Sigma||_F).
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Stationary quantities of a stable model:
///   sigma_L  open-loop covariance,  Sigma_L = A Sigma_L A^T + Q
///   gamma    predictive covariance, DARE fixed point
///   sigma_D  posterior covariance,  gamma - gamma H^T S^-1 H gamma
///   K, S     stationary gain and innovation covariance.
struct StationaryQuantities {
  Matrix sigma_L;
  Matrix gamma;
  Matrix sigma_D;
  Matrix K;
  Matrix S;
};

/// Riccati fixed-point iteration from Gamma_0 = Q, convergence threshold
/// 1e-12 on the Frobenius update, budget 100000 iterations.
StationaryQuantities solve_dare(const LtiModel& model);

/// Asymptotic joint second moments of the two filters' means
/// [mu_{t|t}; mu*_{t|t}] driven by data from the true model.
struct JointStationaryMoments {
  Matrix M;         // (n+n*) x (n+n*), solves M = script_A M script_A^T + script_Q
  Matrix script_A;  // [(I-KH)A, K H* A*; 0, A*]
  Matrix script_Q;  // [K S* K^T, K S* K*^T; K* S* K^T, K* S* K*^T]
  std::optional<Matrix> M_delta;  // Cov(mu* - mu), only when n == n*
  Matrix M_S;                     // Cov(H* A* mu* - H A mu)
};

JointStationaryMoments joint_moments(const ModelPair& pair,
                                     const StationaryQuantities& sq,
                                     const StationaryQuantities& sq_star);

}  // namespace boed

#endif
