#include "boed/model.hpp"

#include <sstream>

#include "boed/errors.hpp"

namespace boed {

namespace {

Matrix checked_covariance(const Matrix& cov, const char* what,
                          double sym_tol = 1e-9, double psd_tol = 1e-10) {
  if (cov.rows() != cov.cols()) {
    std::ostringstream msg;
    msg << what << ": covariance is " << cov.rows() << "x" << cov.cols();
    throw DimensionError(msg.str());
  }
  if (cov.size() > 0 && asymmetry(cov) > sym_tol) {
    std::ostringstream msg;
    msg << what << ": covariance asymmetry " << asymmetry(cov)
        << " exceeds tolerance " << sym_tol;
    throw NotPsdError(msg.str());
  }
  Matrix sym = symmetrize(cov);
  if (sym.size() > 0) {
    double lo = min_eigenvalue(sym);
    if (lo < -psd_tol) {
      std::ostringstream msg;
      msg << what << ": covariance has eigenvalue " << lo
          << " below PSD tolerance";
      throw NotPsdError(msg.str());
    }
  }
  return sym;
}

}  // namespace

GaussianBelief make_belief(const Vector& mean, const Matrix& cov) {
  if (mean.size() != cov.rows()) {
    std::ostringstream msg;
    msg << "make_belief: mean length " << mean.size()
        << " does not match covariance rows " << cov.rows();
    throw DimensionError(msg.str());
  }
  return GaussianBelief{mean, checked_covariance(cov, "make_belief")};
}

LtiModel make_lti(const Matrix& A, const Matrix& H, const Matrix& Q,
                  const Matrix& R, const GaussianBelief& init) {
  const Eigen::Index n = A.rows();
  const Eigen::Index s = H.rows();
  if (A.cols() != n) throw DimensionError("make_lti: A is not square");
  if (H.cols() != n) {
    std::ostringstream msg;
    msg << "make_lti: H has " << H.cols() << " columns, expected " << n;
    throw DimensionError(msg.str());
  }
  if (Q.rows() != n || Q.cols() != n)
    throw DimensionError("make_lti: Q dimensions do not match A");
  if (R.rows() != s || R.cols() != s)
    throw DimensionError("make_lti: R dimensions do not match H rows");
  if (init.dim() != n)
    throw DimensionError("make_lti: init dimension does not match A");

  LtiModel m;
  m.A = A;
  m.H = H;
  m.Q = checked_covariance(Q, "make_lti: Q");
  m.R = checked_covariance(R, "make_lti: R");
  if (s > 0 && min_eigenvalue(m.R) <= 1e-12) {
    std::ostringstream msg;
    msg << "make_lti: R smallest eigenvalue " << min_eigenvalue(m.R)
        << " is not positive definite (requires > 1e-12)";
    throw NotPsdError(msg.str());
  }
  m.init = init;
  return m;
}

ModelPair make_pair(const LtiModel& inference, const LtiModel& truth) {
  if (inference.obs_dim() != truth.obs_dim()) {
    std::ostringstream msg;
    msg << "make_pair: observation dimensions differ (" << inference.obs_dim()
        << " vs " << truth.obs_dim() << ")";
    throw DimensionError(msg.str());
  }
  return ModelPair{inference, truth};
}

LtiModel discretize(const CtlsModel& ctls, const GaussianBelief& init) {
  if (ctls.dt <= 0) throw Error("discretize: dt must be positive");
  Matrix a = expm(ctls.Ac * ctls.dt);
  return make_lti(a, ctls.C, ctls.Qd, ctls.Rd, init);
}

LtiModel discretize(const CtlsModel& ctls) {
  const Eigen::Index n = ctls.Ac.rows();
  return discretize(ctls, GaussianBelief{Vector::Zero(n),
                                         Matrix::Identity(n, n)});
}

void require_stable(const Matrix& a, const char* what) {
  double rho = spectral_radius(a);
  if (!(rho < 1.0 - kStabilityMargin)) {
    std::ostringstream msg;
    msg << what << ": spectral radius " << rho
        << " violates asymptotic stability gate (requires < 1 - 1e-8)";
    throw StabilityError(msg.str(), rho);
  }
}

}  // namespace boed
