#ifndef BOED_LINALG_HPP
#define BOED_LINALG_HPP

#include <Eigen/Dense>

namespace boed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// (M + M^T)/2.
Matrix symmetrize(const Matrix& m);

/// Largest off-diagonal asymmetry max_ij |M_ij - M_ji|.
double asymmetry(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& sym);

/// True when all eigenvalues of the (symmetric) matrix are >= -tol.
bool is_psd(const Matrix& sym, double tol = 1e-10);

/// log det of a symmetric positive definite matrix via Cholesky.
/// Throws NotPsdError when the factorization fails.
double logdet_pd(const Matrix& sym, const char* what = "matrix");

/// Largest |eigenvalue|, by power iteration with a deterministic random
/// start.  A least-squares fit of a two-term recurrence handles complex
/// conjugate dominant pairs.  Throws ConvergenceError (carrying the last
/// estimate) after `max_iter` iterations without meeting `tol`.
double spectral_radius(const Matrix& a, double tol = 1e-10,
                       int max_iter = 10000);

/// Matrix exponential by scaling and squaring with a [13/13] Pade kernel.
Matrix expm(const Matrix& a);

}  // namespace boed

#endif
