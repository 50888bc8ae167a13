#ifndef BOED_CRITERIA_HPP
#define BOED_CRITERIA_HPP

#include <optional>

#include "boed/stationary.hpp"

namespace boed {

/// Quantities shared by the mismatched-pair criteria.  delta_H = H* - H is
/// only defined when the two state dimensions agree; delta_y compares the
/// two predictive observation means and exists for any pair.
struct DiscrepancyTerms {
  std::optional<Matrix> delta_H;
  Vector delta_y;
  Matrix S;       // H Sigma H^T + R
  Matrix S_star;  // H* Sigma* H*^T + R*
};

DiscrepancyTerms discrepancy_terms(const ModelPair& pair,
                                   const GaussianBelief& prior,
                                   const GaussianBelief& prior_star);

/// Criteria evaluated at one design point, in nats.  EGIG may be negative;
/// the others are nonnegative up to roundoff.
struct CriteriaRecord {
  double eig = 0.0;
  double egig = 0.0;
  double edi = 0.0;
  double delta_edi = 0.0;
};

/// KL divergence D_KL[N(mu1,S1) || N(mu0,S0)] in nats.  Both covariances
/// must be PD (log-determinants come from Cholesky factors).
double gaussian_kl(const GaussianBelief& p1, const GaussianBelief& p0);

/// Generalized information I_r[p || q] = int r log(p/q) for Gaussians;
/// equals gaussian_kl(r, q) - gaussian_kl(r, p) and can be negative.
double generalized_info(const GaussianBelief& r, const GaussianBelief& p,
                        const GaussianBelief& q);

/// Single-step EIG, 1/2 log|I + H^T R^-1 H Sigma|, evaluated as
/// (logdet S - logdet R)/2.  `prior` is the predictive belief.
double eig_single_step(const LtiModel& model, const GaussianBelief& prior);

/// Asymptotic EIG, (logdet Sigma_L - logdet Sigma_D)/2.
double eig_infinite_horizon(const StationaryQuantities& sq);

/// Single-step EGIG of the mismatched update; priors are the respective
/// predictive beliefs.  Requires equal state dimensions.
double egig_single_step(const ModelPair& pair, const GaussianBelief& prior,
                        const GaussianBelief& prior_star);

/// Asymptotic EGIG,
///   (Tr[Sigma_L^-1 Sigma_L*] - Tr[Sigma_D^-1 (Sigma_D* + M_delta)]
///    + log|Sigma_L|/|Sigma_D|) / 2.
double egig_infinite_horizon(const ModelPair& pair,
                             const JointStationaryMoments& joint,
                             const StationaryQuantities& sq,
                             const StationaryQuantities& sq_star);

/// Single-step EDI: KL between the two predictive observation
/// distributions.  State dimensions may differ.
double edi_single_step(const ModelPair& pair, const GaussianBelief& prior,
                       const GaussianBelief& prior_star);

/// EDI special case for an augmented truth H* = [H, Delta] whose extra
/// states delta_t are independent of x_t with predictive moments
/// (mu_delta, gamma_pred).  `prior` is the base model's predictive belief.
double edi_augmented_special_case(const LtiModel& model,
                                  const GaussianBelief& prior,
                                  const Matrix& delta,
                                  const Matrix& gamma_pred,
                                  const Vector& mu_delta);

/// Asymptotic per-step EDI rate,
///   (Tr[S^-1 S*] + log|S|/|S*| + Tr[S^-1 M_S] - s) / 2.
double delta_edi(const ModelPair& pair, const JointStationaryMoments& joint,
                 const StationaryQuantities& sq,
                 const StationaryQuantities& sq_star);

/// Cumulative EDI over t steps from the initial beliefs, via the
/// time-varying analog of the stationary mean-moment recursion.  Its slope
/// approaches delta_edi for a stable pair.
double edi_cumulative(const ModelPair& pair, int t);

}  // namespace boed

#endif
