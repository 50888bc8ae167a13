#ifndef BOED_TEST_HELPERS_HPP
#define BOED_TEST_HELPERS_HPP

// Shared generators for the test suites.  Everything here is deliberately
// independent of the library's own numerics: eigenvalues come from Eigen's
// dense solvers and randomness from the standard <random> engines, so these
// helpers can serve as oracles for the iterative solvers under test.

#include <random>

#include <Eigen/Eigenvalues>

#include "boed/model.hpp"

namespace testutil {

using boed::Matrix;
using boed::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

/// Dense-eigensolver spectral radius, used as the oracle for the library's
/// power iteration.
inline double eig_radius(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Random matrix rescaled (via the dense eigensolver) to an exact target
/// spectral radius.
inline Matrix random_stable(std::mt19937_64& rng, Eigen::Index n,
                            double radius = 0.9) {
  for (;;) {
    Matrix a = random_matrix(rng, n, n);
    double rho = eig_radius(a);
    if (rho > 1e-6) return a * (radius / rho);
  }
}

inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n,
                         double scale = 1.0) {
  Matrix b = random_matrix(rng, n, n);
  return scale * (b * b.transpose()) + 1e-3 * Matrix::Identity(n, n);
}

inline boed::GaussianBelief random_belief(std::mt19937_64& rng,
                                          Eigen::Index n) {
  return boed::make_belief(random_vector(rng, n), random_spd(rng, n));
}

inline boed::LtiModel random_model(std::mt19937_64& rng, Eigen::Index n,
                                   Eigen::Index s, double radius = 0.9) {
  return boed::make_lti(random_stable(rng, n, radius),
                        random_matrix(rng, s, n), random_spd(rng, n, 0.1),
                        random_spd(rng, s, 0.1), random_belief(rng, n));
}

/// Truth model obtained by a small relative dynamics perturbation plus a
/// mild noise inflation; retries until the perturbed dynamics are stable.
inline boed::LtiModel perturbed_model(std::mt19937_64& rng,
                                      const boed::LtiModel& base,
                                      double scale = 0.03) {
  for (;;) {
    Matrix delta = scale * random_matrix(rng, base.A.rows(), base.A.cols());
    Matrix a_star = base.A + delta.cwiseProduct(base.A);
    if (eig_radius(a_star) >= 0.999) continue;
    return boed::make_lti(a_star, base.H, base.Q, 1.2 * base.R, base.init);
  }
}

/// Exact elementwise equality, for bit-for-bit determinism contracts.
template <class D1, class D2>
bool same_bits(const Eigen::MatrixBase<D1>& a,
               const Eigen::MatrixBase<D2>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace testutil

#endif
