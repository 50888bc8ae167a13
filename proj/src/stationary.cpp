#include "boed/stationary.hpp"

#include <cmath>
#include <sstream>

#include "boed/errors.hpp"

namespace boed {

GaussianBelief predict(const LtiModel& model, const GaussianBelief& belief) {
  if (belief.dim() != model.state_dim())
    throw DimensionError("predict: belief dimension does not match model");
  return GaussianBelief{
      model.A * belief.mean,
      symmetrize(model.A * belief.cov * model.A.transpose() + model.Q)};
}

FilterStep kalman_step(const LtiModel& model, const GaussianBelief& prior,
                       const Vector& y) {
  if (prior.dim() != model.state_dim())
    throw DimensionError("kalman_step: prior dimension does not match model");
  if (y.size() != model.obs_dim())
    throw DimensionError("kalman_step: observation dimension mismatch");

  const Matrix& h = model.H;
  const Matrix hp = h * prior.cov;  // s x n
  Matrix s = symmetrize(hp * h.transpose() + model.R);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw NotPsdError("kalman_step: innovation covariance S is not PD");

  Matrix gain = llt.solve(hp).transpose();  // Sigma H^T S^-1
  Vector innovation = y - h * prior.mean;

  GaussianBelief posterior;
  posterior.mean = prior.mean + gain * innovation;
  posterior.cov = symmetrize(
      (Matrix::Identity(prior.dim(), prior.dim()) - gain * h) * prior.cov);
  return FilterStep{prior, posterior, gain, s};
}

std::vector<FilterStep> filter_trajectory(const LtiModel& model,
                                          const std::vector<Vector>& ys) {
  std::vector<FilterStep> steps;
  steps.reserve(ys.size());
  GaussianBelief belief = model.init;
  for (const Vector& y : ys) {
    FilterStep step = kalman_step(model, predict(model, belief), y);
    belief = step.posterior;
    steps.push_back(std::move(step));
  }
  return steps;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  if (a.rows() != a.cols() || q.rows() != q.cols() || a.rows() != q.rows())
    throw DimensionError("solve_lyapunov: dimension mismatch");
  require_stable(a, "solve_lyapunov");

  Matrix x = symmetrize(q);
  Matrix ak = a;
  const int max_doublings = 200;
  bool converged = false;
  for (int i = 0; i < max_doublings; ++i) {
    Matrix delta = ak * x * ak.transpose();
    x = symmetrize(x + delta);
    if (delta.norm() < 1e-12 * (1.0 + x.norm())) {
      converged = true;
      break;
    }
    ak = ak * ak;
  }
  double resid = (a * x * a.transpose() + q - x).norm();
  if (!converged || resid >= 1e-9 * (1.0 + x.norm())) {
    std::ostringstream msg;
    msg << "solve_lyapunov: residual " << resid << " did not converge";
    throw ConvergenceError(msg.str(), resid);
  }
  return x;
}

StationaryQuantities solve_dare(const LtiModel& model) {
  require_stable(model.A, "solve_dare");
  const Matrix& a = model.A;
  const Matrix& h = model.H;

  Matrix gamma = model.Q;
  const int max_iter = 100000;
  bool converged = false;
  auto posterior_cov = [&](const Matrix& g) {
    Matrix hg = h * g;  // s x n
    Matrix s = symmetrize(hg * h.transpose() + model.R);
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success)
      throw NotPsdError("solve_dare: H Gamma H^T + R is not PD");
    return symmetrize(g - hg.transpose() * llt.solve(hg));
  };
  for (int i = 0; i < max_iter; ++i) {
    Matrix next = symmetrize(a * posterior_cov(gamma) * a.transpose() + model.Q);
    double update = (next - gamma).norm();
    gamma = next;
    if (update < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("solve_dare: Riccati iteration did not reach 1e-12 "
                           "within 100000 iterations");

  StationaryQuantities sq;
  sq.gamma = gamma;
  sq.sigma_D = posterior_cov(gamma);
  Matrix hg = h * gamma;
  sq.S = symmetrize(hg * h.transpose() + model.R);
  sq.K = Eigen::LLT<Matrix>(sq.S).solve(hg).transpose();
  sq.sigma_L = solve_lyapunov(a, model.Q);

  double resid = (a * gamma * a.transpose() + model.Q -
                  a * hg.transpose() * Eigen::LLT<Matrix>(sq.S).solve(hg) *
                      a.transpose() -
                  gamma)
                     .norm();
  if (resid >= 1e-9 * (1.0 + gamma.norm())) {
    std::ostringstream msg;
    msg << "solve_dare: DARE residual " << resid << " above tolerance";
    throw ConvergenceError(msg.str(), resid);
  }
  return sq;
}

JointStationaryMoments joint_moments(const ModelPair& pair,
                                     const StationaryQuantities& sq,
                                     const StationaryQuantities& sq_star) {
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  const Eigen::Index n = m.state_dim();
  const Eigen::Index ns = ms.state_dim();

  JointStationaryMoments jm;
  jm.script_A = Matrix::Zero(n + ns, n + ns);
  jm.script_A.topLeftCorner(n, n) =
      (Matrix::Identity(n, n) - sq.K * m.H) * m.A;
  jm.script_A.topRightCorner(n, ns) = sq.K * ms.H * ms.A;
  jm.script_A.bottomRightCorner(ns, ns) = ms.A;

  jm.script_Q = Matrix::Zero(n + ns, n + ns);
  jm.script_Q.topLeftCorner(n, n) = sq.K * sq_star.S * sq.K.transpose();
  jm.script_Q.topRightCorner(n, ns) = sq.K * sq_star.S * sq_star.K.transpose();
  jm.script_Q.bottomLeftCorner(ns, n) =
      jm.script_Q.topRightCorner(n, ns).transpose();
  jm.script_Q.bottomRightCorner(ns, ns) =
      sq_star.K * sq_star.S * sq_star.K.transpose();

  jm.M = solve_lyapunov(jm.script_A, symmetrize(jm.script_Q));

  if (n == ns) {
    // [-I I] M [-I I]^T
    jm.M_delta = symmetrize(jm.M.topLeftCorner(n, n) -
                            jm.M.topRightCorner(n, n) -
                            jm.M.bottomLeftCorner(n, n) +
                            jm.M.bottomRightCorner(n, n));
  }

  Matrix c(m.obs_dim(), n + ns);  // [-HA  H*A*]
  c.leftCols(n) = -m.H * m.A;
  c.rightCols(ns) = ms.H * ms.A;
  jm.M_S = symmetrize(c * jm.M * c.transpose());
  return jm;
}

}  // namespace boed
