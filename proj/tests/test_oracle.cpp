#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boed/oracle.hpp"
#include "helpers.hpp"

using namespace boed;

TEST_CASE("simulate_trajectory: noiseless dynamics decay geometrically") {
  Vector x0 = Vector::Constant(2, 3.0);
  LtiModel m{0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
             Matrix::Zero(2, 2), Matrix::Zero(2, 2),
             GaussianBelief{x0, Matrix::Zero(2, 2)}};
  auto [xs, ys] = simulate_trajectory(m, 4, 42);
  REQUIRE(xs.size() == 5);
  REQUIRE(ys.size() == 4);
  for (int t = 0; t <= 4; ++t)
    CHECK((xs[t] - std::pow(0.5, t) * x0).cwiseAbs().maxCoeff() < 1e-14);
  for (int t = 0; t < 4; ++t)
    CHECK((ys[t] - xs[t + 1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate_trajectory is deterministic in the seed") {
  std::mt19937_64 rng(111);
  LtiModel m = testutil::random_model(rng, 3, 2);
  auto a = simulate_trajectory(m, 50, 9);
  auto b = simulate_trajectory(m, 50, 9);
  for (std::size_t t = 0; t < a.first.size(); ++t)
    CHECK(testutil::same_bits(a.first[t], b.first[t]));
  for (std::size_t t = 0; t < a.second.size(); ++t)
    CHECK(testutil::same_bits(a.second[t], b.second[t]));
  auto c = simulate_trajectory(m, 50, 10);
  CHECK(!testutil::same_bits(a.first.back(), c.first.back()));
}

TEST_CASE("late-time sample variance matches the Lyapunov solution") {
  // Scalar model with sigma_L = q / (1 - a^2) = 1.
  GaussianBelief init = make_belief(Vector::Zero(1), Matrix::Identity(1, 1));
  LtiModel m = make_lti(Matrix::Constant(1, 1, 0.8), Matrix::Identity(1, 1),
                       Matrix::Constant(1, 1, 0.36),
                       Matrix::Constant(1, 1, 1e-4), init);
  const int kTrajectories = 100000;
  const int kHorizon = 40;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kTrajectories; ++i) {
    auto [xs, ys] = simulate_trajectory(m, kHorizon, 1000 + i);
    double x = xs.back()[0];
    sum += x;
    sum_sq += x * x;
  }
  double var = sum_sq / kTrajectories -
               (sum / kTrajectories) * (sum / kTrajectories);
  // Var of a sample variance of N Gaussians is about 2 sigma^4 / N.
  double se = std::sqrt(2.0 / kTrajectories);
  CHECK(std::abs(var - 1.0) < 3.0 * se);
}

TEST_CASE("mc_eig_single_step: blind design and scalar closed form") {
  GaussianBelief prior = make_belief(Vector::Zero(1),
                                     Matrix::Identity(1, 1));
  SimConfig cfg;
  cfg.seed = 7;
  cfg.n_samples = 10000;

  LtiModel blind = make_lti(Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                            Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                            prior);
  McEstimate zero = mc_eig_single_step(blind, prior, cfg);
  CHECK(zero.mean == doctest::Approx(0.0));
  CHECK(zero.std_error == doctest::Approx(0.0));

  LtiModel scalar = make_lti(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                             Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                             prior);
  McEstimate est = mc_eig_single_step(scalar, prior, cfg);
  CHECK(std::abs(est.mean - 0.5 * std::log(2.0)) < 3.0 * est.std_error);
  CHECK(est.n == cfg.n_samples);
}

TEST_CASE("mc_eig_single_step standard error shrinks like 1/sqrt(n)") {
  std::mt19937_64 rng(113);
  LtiModel m = testutil::random_model(rng, 3, 2);
  GaussianBelief prior = testutil::random_belief(rng, 3);
  SimConfig small{21, 4000, 100, 10};
  SimConfig big{21, 16000, 100, 10};
  McEstimate a = mc_eig_single_step(m, prior, small);
  McEstimate b = mc_eig_single_step(m, prior, big);
  CHECK(b.std_error / a.std_error == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("mc_egig_single_step matches mc_eig for an identical pair") {
  std::mt19937_64 rng(127);
  LtiModel m = testutil::random_model(rng, 2, 1);
  GaussianBelief prior = testutil::random_belief(rng, 2);
  ModelPair pair = make_pair(m, m);
  SimConfig cfg{3, 5000, 100, 10};
  McEstimate eig = mc_eig_single_step(m, prior, cfg);
  McEstimate egig = mc_egig_single_step(pair, prior, prior, cfg);
  double se = std::hypot(eig.std_error, egig.std_error);
  CHECK(std::abs(eig.mean - egig.mean) <= 3.0 * se + 1e-12);
}

TEST_CASE("mc_delta_edi is centered on zero for an identical pair") {
  std::mt19937_64 rng(131);
  LtiModel m = testutil::random_model(rng, 2, 1, 0.8);
  ModelPair pair = make_pair(m, m);
  SimConfig cfg{5, 50, 800, 100};
  McEstimate est = mc_delta_edi(pair, cfg);
  CHECK(std::abs(est.mean) < 1e-10);
}

TEST_CASE("mc estimates are reproducible bit-for-bit") {
  std::mt19937_64 rng(137);
  LtiModel inference = testutil::random_model(rng, 2, 1, 0.85);
  LtiModel truth = testutil::perturbed_model(rng, inference, 0.04);
  ModelPair pair = make_pair(inference, truth);
  SimConfig cfg{99, 40, 600, 100};

  McEstimate a = mc_delta_edi(pair, cfg);
  McEstimate b = mc_delta_edi(pair, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.n == b.n);

  McEstimate c = mc_egig_infinite_horizon(pair, cfg);
  McEstimate d = mc_egig_infinite_horizon(pair, cfg);
  CHECK(c.mean == d.mean);
  CHECK(c.std_error == d.std_error);
}

TEST_CASE("NormalSampler streams are deterministic and index-disjoint") {
  NormalSampler a(5, 0), b(5, 0), c(5, 1);
  Vector va = a.vector(8);
  Vector vb = b.vector(8);
  Vector vc = c.vector(8);
  CHECK(testutil::same_bits(va, vb));
  CHECK(!testutil::same_bits(va, vc));
}

TEST_CASE("psd_sqrt factors a covariance and clips tiny negatives") {
  std::mt19937_64 rng(139);
  Matrix cov = testutil::random_spd(rng, 4);
  Matrix l = psd_sqrt(cov);
  CHECK((l * l.transpose() - cov).cwiseAbs().maxCoeff() < 1e-10);

  Matrix nearly = cov;
  nearly -= 1e-12 * Matrix::Identity(4, 4);  // may dip slightly below zero
  CHECK_NOTHROW(psd_sqrt(nearly));
  CHECK_NOTHROW(psd_sqrt(Matrix::Zero(3, 3)));
}
