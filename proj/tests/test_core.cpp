#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boed/config.hpp"
#include "boed/design.hpp"
#include "boed/errors.hpp"
#include "boed/linalg.hpp"
#include "boed/model.hpp"
#include "helpers.hpp"

using namespace boed;
using testutil::random_matrix;
using testutil::random_stable;

TEST_CASE("make_belief accepts the identity covariance") {
  GaussianBelief b = make_belief(Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK(b.dim() == 2);
  CHECK(testutil::same_bits(b.cov, Matrix::Identity(2, 2)));
}

TEST_CASE("make_belief rejects an indefinite covariance") {
  Matrix cov(2, 2);
  cov << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(make_belief(Vector::Zero(2), cov), NotPsdError);
}

TEST_CASE("make_belief symmetrizes tiny asymmetry") {
  Matrix cov(2, 2);
  cov << 1.0, 1.0 + 1e-12, 1.0, 1.0;
  GaussianBelief b = make_belief(Vector::Zero(2), cov);
  CHECK(b.cov(0, 1) == b.cov(1, 0));
}

TEST_CASE("make_belief rejects asymmetry beyond tolerance and bad dims") {
  Matrix cov(2, 2);
  cov << 1.0, 0.5, 0.1, 1.0;
  CHECK_THROWS_AS(make_belief(Vector::Zero(2), cov), Error);
  CHECK_THROWS_AS(make_belief(Vector::Zero(3), Matrix::Identity(2, 2)),
                  DimensionError);
}

TEST_CASE("make_lti requires a positive definite R") {
  Matrix a = 0.5 * Matrix::Identity(2, 2);
  Matrix h = Matrix::Identity(2, 2);
  Matrix q = Matrix::Identity(2, 2);
  GaussianBelief init = make_belief(Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK_THROWS_AS(make_lti(a, h, q, Matrix::Zero(2, 2), init), Error);
  CHECK_NOTHROW(make_lti(a, h, q, 0.01 * Matrix::Identity(2, 2), init));
}

TEST_CASE("discretize: zero dynamics give the identity") {
  CtlsModel c;
  c.Ac = Matrix::Zero(3, 3);
  c.C = Matrix::Identity(3, 3);
  c.dt = 0.7;
  c.Qd = Matrix::Identity(3, 3);
  c.Rd = Matrix::Identity(3, 3);
  LtiModel m = discretize(c);
  CHECK((m.A - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(testutil::same_bits(m.H, c.C));
  CHECK(testutil::same_bits(m.Q, c.Qd));
  CHECK(testutil::same_bits(m.R, c.Rd));
}

TEST_CASE("discretize: scalar exponential") {
  CtlsModel c;
  c.Ac = Matrix::Constant(1, 1, -1.0);
  c.C = Matrix::Identity(1, 1);
  c.dt = 1.0;
  c.Qd = Matrix::Identity(1, 1);
  c.Rd = Matrix::Identity(1, 1);
  LtiModel m = discretize(c);
  CHECK(m.A(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

namespace {

Matrix taylor_expm(const Matrix& x, int terms) {
  Matrix sum = Matrix::Identity(x.rows(), x.cols());
  Matrix power = sum;
  double factorial = 1.0;
  for (int k = 1; k <= terms; ++k) {
    power = power * x;
    factorial *= k;
    sum += power / factorial;
  }
  return sum;
}

}  // namespace

TEST_CASE("discretize matches a 20-term Taylor oracle on the two-mass system") {
  SpringMassParams p;
  CtlsModel c = build_two_mass(p);
  c.dt = 0.01;
  LtiModel m = discretize(c);
  Matrix oracle = taylor_expm(c.Ac * c.dt, 20);
  CHECK((m.A - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("discretize keeps block-diagonal structure") {
  std::mt19937_64 rng(11);
  Matrix top = random_matrix(rng, 2, 2);
  Matrix bottom = random_matrix(rng, 3, 3);
  Matrix ac = Matrix::Zero(5, 5);
  ac.topLeftCorner(2, 2) = top;
  ac.bottomRightCorner(3, 3) = bottom;

  CtlsModel c;
  c.Ac = ac;
  c.C = Matrix::Identity(5, 5);
  c.dt = 0.3;
  c.Qd = Matrix::Identity(5, 5);
  c.Rd = Matrix::Identity(5, 5);
  Matrix a = discretize(c).A;

  CHECK(a.topRightCorner(2, 3).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(a.bottomLeftCorner(3, 2).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((a.topLeftCorner(2, 2) - expm(top * 0.3)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((a.bottomRightCorner(3, 3) - expm(bottom * 0.3)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("spectral_radius on easy closed forms") {
  CHECK(spectral_radius(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.9;
  CHECK(spectral_radius(d) == doctest::Approx(0.9).epsilon(1e-10));
  Matrix nilpotent = Matrix::Zero(2, 2);
  nilpotent(0, 1) = 1.0;
  CHECK(spectral_radius(nilpotent) == 0.0);
}

TEST_CASE("spectral_radius matches the dense eigensolver oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix a = random_stable(rng, 4, 0.2 + 0.7 * (trial % 8) / 7.0);
    double oracle = testutil::eig_radius(a);
    CHECK(spectral_radius(a) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("spectral_radius handles dominant complex pairs") {
  // Pure rotation scaled below 1: both eigenvalues share the same modulus,
  // which defeats plain power iteration.
  double theta = 0.83;
  Matrix rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  rot *= 0.77;
  CHECK(spectral_radius(rot) == doctest::Approx(0.77).epsilon(1e-9));

  // Two rotation blocks with close moduli.
  Matrix a = Matrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = rot;
  double phi = 1.91;
  Matrix rot2(2, 2);
  rot2 << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  a.bottomRightCorner(2, 2) = 0.769 * rot2;
  CHECK(spectral_radius(a) == doctest::Approx(0.77).epsilon(1e-8));
}

TEST_CASE("spectral_radius scales linearly with |c|") {
  std::mt19937_64 rng(7);
  Matrix a = random_matrix(rng, 4, 4);
  double base = spectral_radius(a);
  for (double c : {2.0, -0.3, 17.5}) {
    CHECK(spectral_radius(c * a) ==
          doctest::Approx(std::abs(c) * base).epsilon(1e-8));
  }
}

TEST_CASE("require_stable enforces the asymptotic gate") {
  CHECK_NOTHROW(require_stable(0.5 * Matrix::Identity(2, 2), "test"));
  CHECK_THROWS_AS(require_stable(Matrix::Identity(2, 2), "test"),
                  StabilityError);
  CHECK_THROWS_AS(require_stable(1.5 * Matrix::Identity(2, 2), "test"),
                  StabilityError);
}

TEST_CASE("model serialization round-trips bit-for-bit") {
  std::mt19937_64 rng(99);
  LtiModel m = testutil::random_model(rng, 3, 2);
  LtiModel back = lti_from_json(lti_to_json(m), "model");
  CHECK(testutil::same_bits(back.A, m.A));
  CHECK(testutil::same_bits(back.H, m.H));
  CHECK(testutil::same_bits(back.Q, m.Q));
  CHECK(testutil::same_bits(back.R, m.R));
  CHECK(testutil::same_bits(back.init.mean, m.init.mean));
  CHECK(testutil::same_bits(back.init.cov, m.init.cov));
}

TEST_CASE("expm agrees with a closed-form 2x2 rotation") {
  double w = 1.3;
  Matrix ac(2, 2);
  ac << 0.0, -w, w, 0.0;
  Matrix a = expm(ac);
  CHECK(a(0, 0) == doctest::Approx(std::cos(w)).epsilon(1e-12));
  CHECK(a(1, 0) == doctest::Approx(std::sin(w)).epsilon(1e-12));
}

TEST_CASE("expm handles large norms via scaling and squaring") {
  Matrix ac = Matrix::Constant(1, 1, 12.0);
  CHECK(expm(ac)(0, 0) == doctest::Approx(std::exp(12.0)).epsilon(1e-10));
}
