#include "boed/oracle.hpp"

#include <cmath>

#include "boed/errors.hpp"

namespace boed {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0xd1342543de82ef95ULL * (index + 1);
  return splitmix64(s);
}

McEstimate reduce(const std::vector<double>& samples) {
  McEstimate est;
  est.n = static_cast<int>(samples.size());
  if (samples.empty()) return est;
  double sum = 0.0;
  for (double v : samples) sum += v;
  est.mean = sum / est.n;
  if (est.n > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (est.n - 1.0) / est.n);
  }
  return est;
}

}  // namespace

NormalSampler::NormalSampler(std::uint64_t seed, std::uint64_t index)
    : state_(stream_seed(seed, index)) {}

double NormalSampler::operator()() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; uniforms strictly inside (0,1).
  double u1 = (splitmix64(state_) >> 11) * 0x1.0p-53 + 0x1.0p-54;
  double u2 = (splitmix64(state_) >> 11) * 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

Vector NormalSampler::vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = (*this)();
  return v;
}

Matrix psd_sqrt(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(cov));
  Vector evals = es.eigenvalues();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals[i] < -1e-10)
      throw NotPsdError("psd_sqrt: covariance has eigenvalue below -1e-10");
    if (evals[i] < 0.0) evals[i] = 0.0;
  }
  return es.eigenvectors() * evals.cwiseSqrt().asDiagonal();
}

std::pair<std::vector<Vector>, std::vector<Vector>> simulate_trajectory(
    const LtiModel& model, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw Error("simulate_trajectory: horizon must be >= 1");
  NormalSampler rng(seed, 0);
  const Matrix l0 = psd_sqrt(model.init.cov);
  const Matrix lq = psd_sqrt(model.Q);
  const Matrix lr = psd_sqrt(model.R);
  const Eigen::Index n = model.state_dim();
  const Eigen::Index s = model.obs_dim();

  std::vector<Vector> states;
  std::vector<Vector> obs;
  states.reserve(horizon + 1);
  obs.reserve(horizon);
  Vector x = model.init.mean + l0 * rng.vector(n);
  states.push_back(x);
  for (int t = 0; t < horizon; ++t) {
    x = model.A * x + lq * rng.vector(n);
    states.push_back(x);
    obs.push_back(model.H * x + lr * rng.vector(s));
  }
  return {std::move(states), std::move(obs)};
}

McEstimate mc_eig_single_step(const LtiModel& model,
                              const GaussianBelief& prior,
                              const SimConfig& cfg) {
  if (cfg.n_samples < 1) throw Error("mc_eig_single_step: n_samples >= 1");
  Matrix s =
      symmetrize(model.H * prior.cov * model.H.transpose() + model.R);
  Matrix ls = psd_sqrt(s);
  Vector y_mean = model.H * prior.mean;

  std::vector<double> samples(cfg.n_samples);
  for (int i = 0; i < cfg.n_samples; ++i) {
    NormalSampler rng(cfg.seed, static_cast<std::uint64_t>(i));
    Vector y = y_mean + ls * rng.vector(model.obs_dim());
    FilterStep step = kalman_step(model, prior, y);
    samples[i] = gaussian_kl(step.posterior, prior);
  }
  return reduce(samples);
}

McEstimate mc_egig_single_step(const ModelPair& pair,
                               const GaussianBelief& prior,
                               const GaussianBelief& prior_star,
                               const SimConfig& cfg) {
  if (cfg.n_samples < 1) throw Error("mc_egig_single_step: n_samples >= 1");
  const LtiModel& ms = pair.truth;
  Matrix s_star =
      symmetrize(ms.H * prior_star.cov * ms.H.transpose() + ms.R);
  Matrix ls = psd_sqrt(s_star);
  Vector y_mean = ms.H * prior_star.mean;

  std::vector<double> samples(cfg.n_samples);
  for (int i = 0; i < cfg.n_samples; ++i) {
    NormalSampler rng(cfg.seed, static_cast<std::uint64_t>(i));
    Vector y = y_mean + ls * rng.vector(ms.obs_dim());
    GaussianBelief post_star = kalman_step(ms, prior_star, y).posterior;
    GaussianBelief post = kalman_step(pair.inference, prior, y).posterior;
    samples[i] = generalized_info(post_star, post, prior);
  }
  return reduce(samples);
}

namespace {

/// Data-independent per-step filter schedule: innovation factorization,
/// gain, and the observation-independent part of the predictive KL.
struct FilterSchedule {
  std::vector<Matrix> gain;        // inference model K_t
  std::vector<Matrix> gain_star;   // true model K*_t
  std::vector<Eigen::LLT<Matrix>> llt_s;  // Cholesky of S_t
  std::vector<double> kl_constant;        // KL terms without the mean quad
};

FilterSchedule build_schedule(const ModelPair& pair, int horizon) {
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  FilterSchedule sched;
  sched.gain.reserve(horizon);
  sched.gain_star.reserve(horizon);
  sched.llt_s.reserve(horizon);
  sched.kl_constant.reserve(horizon);

  Matrix cov = m.init.cov;
  Matrix cov_star = ms.init.cov;
  const Eigen::Index n = m.state_dim();
  const Eigen::Index nstar = ms.state_dim();
  const double s_count = static_cast<double>(m.obs_dim());

  for (int t = 0; t < horizon; ++t) {
    Matrix pred = symmetrize(m.A * cov * m.A.transpose() + m.Q);
    Matrix pred_star = symmetrize(ms.A * cov_star * ms.A.transpose() + ms.Q);
    Matrix s = symmetrize(m.H * pred * m.H.transpose() + m.R);
    Matrix s_star = symmetrize(ms.H * pred_star * ms.H.transpose() + ms.R);
    Eigen::LLT<Matrix> llt(s);
    Eigen::LLT<Matrix> llt_star(s_star);
    if (llt.info() != Eigen::Success || llt_star.info() != Eigen::Success)
      throw NotPsdError("oracle: predictive covariance not PD");

    double logdet_s =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    double logdet_star = 2.0 * llt_star.matrixL().toDenseMatrix()
                                   .diagonal().array().log().sum();
    sched.kl_constant.push_back(
        0.5 * (llt.solve(s_star).trace() + logdet_s - logdet_star - s_count));
    sched.gain.push_back(llt.solve(m.H * pred).transpose());
    sched.gain_star.push_back(llt_star.solve(ms.H * pred_star).transpose());
    sched.llt_s.push_back(std::move(llt));

    cov = symmetrize((Matrix::Identity(n, n) - sched.gain.back() * m.H) * pred);
    cov_star = symmetrize(
        (Matrix::Identity(nstar, nstar) - sched.gain_star.back() * ms.H) *
        pred_star);
  }
  return sched;
}

}  // namespace

McEstimate mc_delta_edi(const ModelPair& pair, const SimConfig& cfg) {
  if (cfg.n_samples < 1) throw Error("mc_delta_edi: n_samples >= 1");
  if (cfg.burn_in >= cfg.horizon)
    throw Error("mc_delta_edi: burn_in must be below horizon");
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  FilterSchedule sched = build_schedule(pair, cfg.horizon);

  std::vector<double> samples(cfg.n_samples);
  for (int j = 0; j < cfg.n_samples; ++j) {
    auto [states, obs] = simulate_trajectory(
        ms, cfg.horizon, stream_seed(cfg.seed, static_cast<std::uint64_t>(j)));
    Vector mu = m.init.mean;
    Vector mu_star = ms.init.mean;
    double acc = 0.0;
    int counted = 0;
    for (int t = 0; t < cfg.horizon; ++t) {
      Vector mu_pred = m.A * mu;
      Vector mu_pred_star = ms.A * mu_star;
      if (t >= cfg.burn_in) {
        Vector dy = ms.H * mu_pred_star - m.H * mu_pred;
        acc += sched.kl_constant[t] + 0.5 * dy.dot(sched.llt_s[t].solve(dy));
        ++counted;
      }
      mu = mu_pred + sched.gain[t] * (obs[t] - m.H * mu_pred);
      mu_star =
          mu_pred_star + sched.gain_star[t] * (obs[t] - ms.H * mu_pred_star);
    }
    samples[j] = acc / counted;
  }
  return reduce(samples);
}

McEstimate mc_egig_infinite_horizon(const ModelPair& pair,
                                    const SimConfig& cfg) {
  if (cfg.n_samples < 1)
    throw Error("mc_egig_infinite_horizon: n_samples >= 1");
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  FilterSchedule sched = build_schedule(pair, cfg.horizon);

  // Final posterior covariances (data independent) and the stationary
  // open-loop prior for the inference model.
  Matrix cov = m.init.cov;
  Matrix cov_star = ms.init.cov;
  const Eigen::Index n = m.state_dim();
  const Eigen::Index nstar = ms.state_dim();
  for (int t = 0; t < cfg.horizon; ++t) {
    Matrix pred = symmetrize(m.A * cov * m.A.transpose() + m.Q);
    Matrix pred_star = symmetrize(ms.A * cov_star * ms.A.transpose() + ms.Q);
    cov = symmetrize((Matrix::Identity(n, n) - sched.gain[t] * m.H) * pred);
    cov_star = symmetrize(
        (Matrix::Identity(nstar, nstar) - sched.gain_star[t] * ms.H) *
        pred_star);
  }
  GaussianBelief prior{Vector::Zero(n), solve_lyapunov(m.A, m.Q)};

  std::vector<double> samples(cfg.n_samples);
  for (int j = 0; j < cfg.n_samples; ++j) {
    auto [states, obs] = simulate_trajectory(
        ms, cfg.horizon, stream_seed(cfg.seed, static_cast<std::uint64_t>(j)));
    Vector mu = m.init.mean;
    Vector mu_star = ms.init.mean;
    for (int t = 0; t < cfg.horizon; ++t) {
      Vector mu_pred = m.A * mu;
      Vector mu_pred_star = ms.A * mu_star;
      mu = mu_pred + sched.gain[t] * (obs[t] - m.H * mu_pred);
      mu_star =
          mu_pred_star + sched.gain_star[t] * (obs[t] - ms.H * mu_pred_star);
    }
    samples[j] = generalized_info(GaussianBelief{mu_star, cov_star},
                                  GaussianBelief{mu, cov}, prior);
  }
  return reduce(samples);
}

}  // namespace boed
