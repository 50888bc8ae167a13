#include "boed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "boed/errors.hpp"

namespace boed {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(sym),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Matrix& sym, double tol) {
  if (sym.rows() == 0) return true;
  return min_eigenvalue(sym) >= -tol;
}

double logdet_pd(const Matrix& sym, const char* what) {
  Eigen::LLT<Matrix> llt(symmetrize(sym));
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << what << " is not positive definite (Cholesky failed)";
    throw NotPsdError(msg.str());
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

namespace {

Vector random_unit_vector(std::mt19937_64& gen, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(gen);
  double nrm = v.norm();
  return nrm > 0 ? Vector(v / nrm) : Vector(Vector::Unit(n, 0));
}

/// Krylov-projected estimate from start vector x0: builds an orthonormal
/// basis of span{x0, Ax0, ..., A^{m-1}x0} with the projected Hessenberg
/// matrix, and returns the largest validated Ritz value modulus.  Returns
/// false when no Ritz value meets the residual tolerance.
bool arnoldi_radius(const Matrix& a, const Vector& x0, int m, double tol,
                    double& radius) {
  const Eigen::Index n = a.rows();
  m = std::min<int>(m, static_cast<int>(n));
  Matrix basis(n, m + 1);
  Matrix hess = Matrix::Zero(m + 1, m);
  basis.col(0) = x0 / x0.norm();
  int built = m;
  bool invariant = false;
  for (int j = 0; j < m; ++j) {
    Vector w = a * basis.col(j);
    for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt, one re-pass
      double h = basis.col(i).dot(w);
      hess(i, j) += h;
      w -= h * basis.col(i);
    }
    for (int i = 0; i <= j; ++i) {
      double h = basis.col(i).dot(w);
      hess(i, j) += h;
      w -= h * basis.col(i);
    }
    double nw = w.norm();
    hess(j + 1, j) = nw;
    if (nw < 1e-12) {
      built = j + 1;  // invariant subspace; Ritz values are exact
      invariant = true;
      break;
    }
    basis.col(j + 1) = w / nw;
  }

  Eigen::EigenSolver<Matrix> es(hess.topLeftCorner(built, built));
  if (es.info() != Eigen::Success) return false;
  const double h_last = invariant ? 0.0 : hess(built, built - 1);
  double best = -1.0;
  for (Eigen::Index k = 0; k < built; ++k) {
    double mod = std::abs(es.eigenvalues()[k]);
    if (mod <= best) continue;
    double resid = h_last * std::abs(es.eigenvectors()(built - 1, k));
    if (resid <= tol * std::max(1.0, mod)) best = mod;
  }
  if (best < 0.0) return false;
  radius = best;
  return true;
}

}  // namespace

double spectral_radius(const Matrix& a, double tol, int max_iter) {
  if (a.rows() != a.cols()) throw DimensionError("spectral_radius: matrix not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));

  std::mt19937_64 gen(0x5eed5eed5eed5eedULL);  // deterministic
  Vector x = random_unit_vector(gen, n);
  double estimate = 0.0;
  int restarts = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    Vector y = a * x;
    double ny = y.norm();
    if (ny < 1e-150) {
      // x landed (numerically) in the kernel; restart, and after repeated
      // collapses conclude the dominant eigenvalue is zero (nilpotent A).
      if (++restarts > 5) return 0.0;
      x = random_unit_vector(gen, n);
      continue;
    }
    double lambda = x.dot(y);  // Rayleigh quotient, x is unit
    estimate = std::abs(lambda);
    if ((y - lambda * x).norm() <= tol * std::max(1.0, ny)) return estimate;

    // Complex conjugate dominant pair: fit z = alpha*y + beta*x and take the
    // larger root modulus of t^2 - alpha t - beta.
    Vector z = a * y;
    double yy = y.squaredNorm(), xy = x.dot(y);
    double det = yy - xy * xy;  // Gram determinant, |x|=1
    if (det > 1e-14 * std::max(1.0, yy)) {
      double zy = z.dot(y), zx = z.dot(x);
      double alpha = (zy - xy * zx) / det;
      double beta = (yy * zx - xy * zy) / det;
      if ((z - alpha * y - beta * x).norm() <=
          tol * std::max(1.0, z.norm())) {
        double disc = alpha * alpha + 4.0 * beta;
        if (disc >= 0) {
          double r1 = 0.5 * (alpha + std::sqrt(disc));
          double r2 = 0.5 * (alpha - std::sqrt(disc));
          return std::max(std::abs(r1), std::abs(r2));
        }
        return std::sqrt(-beta);  // conjugate pair, modulus sqrt(|beta|)
      }
    }
    // Clustered moduli (several eigenvalue pairs of similar magnitude) defeat
    // the rank-1/rank-2 fits; project onto a Krylov subspace instead.
    if (iter >= 50 && iter % 50 == 0) {
      double radius = 0.0;
      if (arnoldi_radius(a, x, 2 * static_cast<int>(n) + 2, tol, radius))
        return radius;
    }
    x = y / ny;
  }
  std::ostringstream msg;
  msg << "spectral_radius: no convergence after " << max_iter
      << " iterations (last estimate " << estimate << ")";
  throw ConvergenceError(msg.str(), estimate);
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  // Higham's [13/13] Pade coefficients.
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const double theta13 = 5.371920351148152;

  double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  int squarings = 0;
  Matrix as = a;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    as /= std::ldexp(1.0, squarings);
  }

  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  Matrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                   b[5] * a4 + b[3] * a2 + b[1] * ident);
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
             b[4] * a4 + b[2] * a2 + b[0] * ident;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace boed
