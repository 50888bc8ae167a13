#include "boed/criteria.hpp"

#include <cmath>

#include "boed/errors.hpp"

namespace boed {

DiscrepancyTerms discrepancy_terms(const ModelPair& pair,
                                   const GaussianBelief& prior,
                                   const GaussianBelief& prior_star) {
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  if (prior.dim() != m.state_dim() || prior_star.dim() != ms.state_dim())
    throw DimensionError("discrepancy_terms: prior dimensions do not match");

  DiscrepancyTerms d;
  if (m.state_dim() == ms.state_dim()) d.delta_H = ms.H - m.H;
  d.delta_y = ms.H * prior_star.mean - m.H * prior.mean;
  d.S = symmetrize(m.H * prior.cov * m.H.transpose() + m.R);
  d.S_star = symmetrize(ms.H * prior_star.cov * ms.H.transpose() + ms.R);
  return d;
}

double gaussian_kl(const GaussianBelief& p1, const GaussianBelief& p0) {
  const Eigen::Index n = p1.dim();
  if (p0.dim() != n) throw DimensionError("gaussian_kl: dimension mismatch");
  if (n == 0) return 0.0;

  Eigen::LLT<Matrix> llt0(symmetrize(p0.cov));
  if (llt0.info() != Eigen::Success)
    throw NotPsdError("gaussian_kl: reference covariance is singular");
  double logdet0 =
      2.0 * llt0.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double logdet1 = logdet_pd(p1.cov, "gaussian_kl: covariance");

  double trace = llt0.solve(p1.cov).trace();
  Vector dmu = p1.mean - p0.mean;
  double quad = dmu.dot(llt0.solve(dmu));
  return 0.5 * (trace - static_cast<double>(n) + quad + logdet0 - logdet1);
}

double generalized_info(const GaussianBelief& r, const GaussianBelief& p,
                        const GaussianBelief& q) {
  const Eigen::Index n = r.dim();
  if (p.dim() != n || q.dim() != n)
    throw DimensionError("generalized_info: dimension mismatch");
  if (n == 0) return 0.0;

  Eigen::LLT<Matrix> lltp(symmetrize(p.cov));
  Eigen::LLT<Matrix> lltq(symmetrize(q.cov));
  if (lltp.info() != Eigen::Success)
    throw NotPsdError("generalized_info: p covariance is singular");
  if (lltq.info() != Eigen::Success)
    throw NotPsdError("generalized_info: q covariance is singular");

  double logdet_p =
      2.0 * lltp.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double logdet_q =
      2.0 * lltq.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double trace = lltq.solve(r.cov).trace() - lltp.solve(r.cov).trace();
  Vector drp = r.mean - p.mean;
  Vector drq = r.mean - q.mean;
  return 0.5 * (trace - drp.dot(lltp.solve(drp)) + drq.dot(lltq.solve(drq)) +
                logdet_q - logdet_p);
}

double eig_single_step(const LtiModel& model, const GaussianBelief& prior) {
  if (prior.dim() != model.state_dim())
    throw DimensionError("eig_single_step: prior dimension mismatch");
  if (model.obs_dim() == 0) return 0.0;
  Matrix s = symmetrize(model.H * prior.cov * model.H.transpose() + model.R);
  return 0.5 * (logdet_pd(s, "eig_single_step: S") -
                logdet_pd(model.R, "eig_single_step: R"));
}

double eig_infinite_horizon(const StationaryQuantities& sq) {
  return 0.5 * (logdet_pd(sq.sigma_L, "eig_infinite_horizon: Sigma_L") -
                logdet_pd(sq.sigma_D, "eig_infinite_horizon: Sigma_D"));
}

double egig_single_step(const ModelPair& pair, const GaussianBelief& prior,
                        const GaussianBelief& prior_star) {
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  if (m.state_dim() != ms.state_dim())
    throw DimensionError(
        "egig_single_step: state dimensions differ (EGIG compares beliefs "
        "about the same state)");

  DiscrepancyTerms d = discrepancy_terms(pair, prior, prior_star);
  const Matrix& dh = *d.delta_H;

  Eigen::LLT<Matrix> lltR(symmetrize(m.R));
  if (lltR.info() != Eigen::Success)
    throw NotPsdError("egig_single_step: R is singular");
  Eigen::LLT<Matrix> lltS(d.S);
  if (lltS.info() != Eigen::Success)
    throw NotPsdError("egig_single_step: S is singular");

  double logdet_s = logdet_pd(d.S, "egig_single_step: S");
  double logdet_r = logdet_pd(m.R, "egig_single_step: R");

  Matrix dh_sigma_dh = dh * prior_star.cov * dh.transpose();
  Vector dh_mu = dh * prior_star.mean;
  double value =
      logdet_s - logdet_r - lltR.solve(dh_sigma_dh).trace() -
      lltR.solve(ms.R).trace() + lltS.solve(d.S_star).trace() -
      dh_mu.dot(lltR.solve(dh_mu)) + d.delta_y.dot(lltS.solve(d.delta_y));
  return 0.5 * value;
}

double egig_infinite_horizon(const ModelPair& pair,
                             const JointStationaryMoments& joint,
                             const StationaryQuantities& sq,
                             const StationaryQuantities& sq_star) {
  if (!joint.M_delta)
    throw DimensionError(
        "egig_infinite_horizon: M_delta undefined (state dimensions differ)");

  Eigen::LLT<Matrix> lltL(symmetrize(sq.sigma_L));
  if (lltL.info() != Eigen::Success)
    throw NotPsdError("egig_infinite_horizon: Sigma_L is singular");
  Eigen::LLT<Matrix> lltD(symmetrize(sq.sigma_D));
  if (lltD.info() != Eigen::Success)
    throw NotPsdError("egig_infinite_horizon: Sigma_D is singular");

  double logdet_l =
      2.0 * lltL.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double logdet_d =
      2.0 * lltD.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double value = lltL.solve(sq_star.sigma_L).trace() -
                 lltD.solve(sq_star.sigma_D + *joint.M_delta).trace() +
                 logdet_l - logdet_d;
  return 0.5 * value;
}

namespace {

/// KL between predictive observation Gaussians:
///   KL[N(mean*, S*) || N(mean, S)]
/// expressed through the mean difference and both covariances.
double predictive_kl(const Matrix& s, const Matrix& s_star,
                     const Vector& delta_y) {
  Eigen::LLT<Matrix> llt(symmetrize(s));
  if (llt.info() != Eigen::Success)
    throw NotPsdError("edi: predictive covariance S is singular");
  double logdet_s =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double logdet_star = logdet_pd(s_star, "edi: predictive covariance S*");
  double s_count = static_cast<double>(s.rows());
  return 0.5 * (llt.solve(s_star).trace() + logdet_s - logdet_star +
                delta_y.dot(llt.solve(delta_y)) - s_count);
}

}  // namespace

double edi_single_step(const ModelPair& pair, const GaussianBelief& prior,
                       const GaussianBelief& prior_star) {
  DiscrepancyTerms d = discrepancy_terms(pair, prior, prior_star);
  return predictive_kl(d.S, d.S_star, d.delta_y);
}

double edi_augmented_special_case(const LtiModel& model,
                                  const GaussianBelief& prior,
                                  const Matrix& delta,
                                  const Matrix& gamma_pred,
                                  const Vector& mu_delta) {
  const Eigen::Index s_dim = model.obs_dim();
  const Eigen::Index k = delta.cols();
  if (delta.rows() != s_dim)
    throw DimensionError("edi_augmented_special_case: Delta rows != s");
  if (gamma_pred.rows() != k || gamma_pred.cols() != k ||
      mu_delta.size() != k)
    throw DimensionError(
        "edi_augmented_special_case: Gamma/mu_delta dimensions mismatch");

  Matrix s = symmetrize(model.H * prior.cov * model.H.transpose() + model.R);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw NotPsdError("edi_augmented_special_case: S is not PD");

  Matrix dgd = symmetrize(delta * gamma_pred * delta.transpose());
  Matrix sinv_dgd = llt.solve(dgd);
  double logdet_term =
      (Matrix::Identity(s_dim, s_dim) + sinv_dgd).partialPivLu()
          .determinant();
  Vector dm = delta * mu_delta;
  return 0.5 * (sinv_dgd.trace() - std::log(logdet_term) +
                dm.dot(llt.solve(dm)));
}

double delta_edi(const ModelPair& pair, const JointStationaryMoments& joint,
                 const StationaryQuantities& sq,
                 const StationaryQuantities& sq_star) {
  (void)pair;
  Eigen::LLT<Matrix> llt(symmetrize(sq.S));
  if (llt.info() != Eigen::Success)
    throw NotPsdError("delta_edi: stationary S is singular");
  double logdet_s =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double logdet_star = logdet_pd(sq_star.S, "delta_edi: stationary S*");
  double s_count = static_cast<double>(sq.S.rows());
  return 0.5 * (llt.solve(sq_star.S).trace() + logdet_s - logdet_star +
                llt.solve(joint.M_S).trace() - s_count);
}

double edi_cumulative(const ModelPair& pair, int t) {
  if (t < 1) throw Error("edi_cumulative: t must be >= 1");
  const LtiModel& m = pair.inference;
  const LtiModel& ms = pair.truth;
  const Eigen::Index n = m.state_dim();
  const Eigen::Index nstar = ms.state_dim();

  // Joint mean and central covariance of [mu_{t|t}; mu*_{t|t}] propagated
  // with the per-step gains; the data-generating filter's innovations are
  // zero mean with covariance S*_t.
  Vector mean(n + nstar);
  mean.head(n) = m.init.mean;
  mean.tail(nstar) = ms.init.mean;
  Matrix p = Matrix::Zero(n + nstar, n + nstar);

  Matrix cov = m.init.cov;
  Matrix cov_star = ms.init.cov;
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix ident_star = Matrix::Identity(nstar, nstar);

  double total = 0.0;
  for (int step = 0; step < t; ++step) {
    Matrix pred = symmetrize(m.A * cov * m.A.transpose() + m.Q);
    Matrix pred_star = symmetrize(ms.A * cov_star * ms.A.transpose() + ms.Q);
    Matrix s = symmetrize(m.H * pred * m.H.transpose() + m.R);
    Matrix s_star =
        symmetrize(ms.H * pred_star * ms.H.transpose() + ms.R);

    Eigen::LLT<Matrix> llt(s);
    Eigen::LLT<Matrix> llt_star(s_star);
    if (llt.info() != Eigen::Success || llt_star.info() != Eigen::Success)
      throw NotPsdError("edi_cumulative: predictive covariance not PD");
    Matrix gain = llt.solve(m.H * pred).transpose();
    Matrix gain_star = llt_star.solve(ms.H * pred_star).transpose();

    // Expected KL between the step's predictive observation distributions:
    // mean difference C [mu; mu*] with second moment C P C^T around it.
    Matrix c(m.obs_dim(), n + nstar);
    c.leftCols(n) = -m.H * m.A;
    c.rightCols(nstar) = ms.H * ms.A;
    Vector dy_mean = c * mean;
    Matrix dy_cov = symmetrize(c * p * c.transpose());

    double logdet_s =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    double logdet_star = 2.0 * llt_star.matrixL().toDenseMatrix()
                                   .diagonal().array().log().sum();
    total += 0.5 * (llt.solve(s_star).trace() + logdet_s - logdet_star +
                    llt.solve(dy_cov).trace() +
                    dy_mean.dot(llt.solve(dy_mean)) -
                    static_cast<double>(m.obs_dim()));

    // Advance the joint mean-moment recursion and the covariance paths.
    Matrix script_a = Matrix::Zero(n + nstar, n + nstar);
    script_a.topLeftCorner(n, n) = (ident - gain * m.H) * m.A;
    script_a.topRightCorner(n, nstar) = gain * ms.H * ms.A;
    script_a.bottomRightCorner(nstar, nstar) = ms.A;

    Matrix script_q = Matrix::Zero(n + nstar, n + nstar);
    script_q.topLeftCorner(n, n) = gain * s_star * gain.transpose();
    script_q.topRightCorner(n, nstar) =
        gain * s_star * gain_star.transpose();
    script_q.bottomLeftCorner(nstar, n) =
        script_q.topRightCorner(n, nstar).transpose();
    script_q.bottomRightCorner(nstar, nstar) =
        gain_star * s_star * gain_star.transpose();

    p = symmetrize(script_a * p * script_a.transpose() + script_q);
    mean = script_a * mean;
    cov = symmetrize((ident - gain * m.H) * pred);
    cov_star = symmetrize((ident_star - gain_star * ms.H) * pred_star);
  }
  return total;
}

}  // namespace boed
