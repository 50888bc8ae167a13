#ifndef BOED_ORACLE_HPP
#define BOED_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "boed/criteria.hpp"

namespace boed {

/// Simulation settings.  `seed` drives every random stream; independent
/// streams per sample index are derived from (seed, index) so serial and
/// parallel runs agree.
struct SimConfig {
  std::uint64_t seed = 0;
  int n_samples = 10000;
  int horizon = 5000;
  int burn_in = 500;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n = 0;
};

/// Deterministic normal sampler (Box-Muller over a splitmix64 stream);
/// identical output for identical (seed, index) on any run.
class NormalSampler {
 public:
  NormalSampler(std::uint64_t seed, std::uint64_t index);
  double operator()();
  Vector vector(Eigen::Index n);

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Square-root factor of a PSD covariance (eigenvalues clipped at
/// -1e-10 -> 0; anything lower throws NotPsdError).
Matrix psd_sqrt(const Matrix& cov);

/// Draws x_0 ~ init then iterates the state and observation equations.
/// Returns (states x_0..x_horizon, observations y_1..y_horizon).
std::pair<std::vector<Vector>, std::vector<Vector>> simulate_trajectory(
    const LtiModel& model, int horizon, std::uint64_t seed);

/// MC estimate of the single-step EIG: y ~ N(H mu, S), average
/// gaussian_kl(posterior, prior).
McEstimate mc_eig_single_step(const LtiModel& model,
                              const GaussianBelief& prior,
                              const SimConfig& cfg);

/// MC estimate of the single-step EGIG: y from the true predictive,
/// average generalized_info(posterior*, posterior, prior).
McEstimate mc_egig_single_step(const ModelPair& pair,
                               const GaussianBelief& prior,
                               const GaussianBelief& prior_star,
                               const SimConfig& cfg);

/// MC estimate of Delta_EDI: per-step predictive KL along trajectories
/// simulated from the true model, averaged after burn_in; the standard
/// error is computed across trajectories.
McEstimate mc_delta_edi(const ModelPair& pair, const SimConfig& cfg);

/// MC estimate of the infinite-horizon EGIG: filter both models along true
/// trajectories to the horizon, evaluate
/// generalized_info(posterior*_T, posterior_T, N(0, Sigma_L)) per
/// trajectory.
McEstimate mc_egig_infinite_horizon(const ModelPair& pair,
                                    const SimConfig& cfg);

}  // namespace boed

#endif
