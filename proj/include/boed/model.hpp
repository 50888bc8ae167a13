#ifndef BOED_MODEL_HPP
#define BOED_MODEL_HPP

#include "boed/linalg.hpp"

namespace boed {

/// Mean/covariance pair.  Construct through make_belief so the covariance is
/// symmetrized and PSD-checked; treat as immutable afterwards.
struct GaussianBelief {
  Vector mean;
  Matrix cov;

  Eigen::Index dim() const { return mean.size(); }
};

/// Validates dimensions, symmetrizes cov (asymmetry tolerance 1e-9) and
/// rejects covariances with eigenvalues below -1e-10.
GaussianBelief make_belief(const Vector& mean, const Matrix& cov);

/// Discrete-time linear-Gaussian state-space model
///   x_t = A x_{t-1} + eta_t,   eta_t ~ N(0, Q)
///   y_t = H x_t     + v_t,     v_t   ~ N(0, R)
/// with x_0 ~ init.  Q must be PSD, R strictly PD.
struct LtiModel {
  Matrix A;
  Matrix H;
  Matrix Q;
  Matrix R;
  GaussianBelief init;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index obs_dim() const { return H.rows(); }
};

LtiModel make_lti(const Matrix& A, const Matrix& H, const Matrix& Q,
                  const Matrix& R, const GaussianBelief& init);

/// Inference model M and data-generating model M*.  Observation dimensions
/// must agree (criteria that compare in data space need it); state
/// dimensions may differ, operations requiring equality check it themselves.
struct ModelPair {
  LtiModel inference;  // M
  LtiModel truth;      // M*
};

ModelPair make_pair(const LtiModel& inference, const LtiModel& truth);

/// Continuous-time linear system dx/dt = Ac x with output y = C x, plus the
/// noise covariances to use after discretization (supplied directly in
/// discrete time).
struct CtlsModel {
  Matrix Ac;
  Matrix C;
  double dt = 0.0;
  Matrix Qd;
  Matrix Rd;
};

/// A = expm(Ac*dt), H = C, Q = Qd, R = Rd.  `init` defaults to N(0, I) when
/// not supplied.
LtiModel discretize(const CtlsModel& ctls);
LtiModel discretize(const CtlsModel& ctls, const GaussianBelief& init);

/// Margin used by every asymptotic operation: requires rho(A) < 1 - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-8;

/// Throws StabilityError unless spectral_radius(A) < 1 - kStabilityMargin.
void require_stable(const Matrix& a, const char* what);

}  // namespace boed

#endif
