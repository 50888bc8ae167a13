#ifndef BOED_DESIGN_HPP
#define BOED_DESIGN_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "boed/criteria.hpp"

namespace boed {

/// Parameters of the two-mass spring-mass-damper example.  Defaults are the
/// study configuration shipped with the CLI.
struct SpringMassParams {
  double m1 = 1.0, m2 = 1.0;
  double k1 = 4.0, k2 = 4.0, k3 = 4.0;
  double b1 = 0.1, b2 = 0.1, b3 = 0.1;
  double dt = 0.6;
  double q_scale = 0.01;  // process noise on velocity states
  double r_scale = 0.01;  // measurement noise
};

/// 4-state CTLS with state (x1, x2, v1, v2).  Default output is the d = 0
/// observer (pure position of m1); swap via observer_smd.
CtlsModel build_two_mass(const SpringMassParams& params);

/// 2-state reduction: m1 grounded through spring k1+k2 and damper b1+b2
/// (the rigid-attachment limit of m2).
CtlsModel build_one_mass(const SpringMassParams& params);

/// Observer row [cos d, 0, sin d, 0] weighting position and velocity of
/// m1; d in [0, pi/2].
RowVector observer_smd(double d);

/// Observer row [cos d, sin d] for the one-mass reduction.
RowVector observer_smd_reduced(double d);

/// Fixed 4-state longitudinal LTI surrogate with states (theta, V, alpha,
/// theta_dot); representative closed-loop dynamics, stable and observable.
/// The built-in output measures V only; the remaining states are reached
/// through the designed extra output row.
CtlsModel build_f16_surrogate();

/// New output row d1*theta + d2*alpha + d3*theta_dot with
/// d3 = +sqrt(1 - d1^2 - d2^2); requires d1^2 + d2^2 <= 1.
RowVector observer_f16(double d1, double d2);

/// Elementwise relative dynamics perturbation A* = A + delta (.) A.
struct PerturbationSpec {
  Matrix delta;
};

/// A* for the spec; throws StabilityError when the perturbed dynamics
/// leave the stable region.
Matrix apply_perturbation(const Matrix& a, const PerturbationSpec& spec);

/// Frobenius norm of the central-finite-difference gradient of
/// `objective` with respect to an n x n perturbation matrix, evaluated at
/// zero with step h.
double egig_sensitivity(const std::function<double(const Matrix&)>& objective,
                        Eigen::Index n, double step = 1e-5);

/// One point of a design sweep.
struct DesignPoint {
  Vector params;
  std::string label;
};

struct SweepRecord {
  DesignPoint point;
  CriteriaRecord criteria;
  std::map<std::string, double> extras;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRecord> records;
};

using SweepEvaluator = std::function<std::pair<CriteriaRecord,
    std::map<std::string, double>>(const DesignPoint&)>;

/// Evaluates every design point in grid order.  A failing evaluator marks
/// its record with the error text instead of aborting the sweep.  With
/// workers > 1 points run concurrently; the result order is always the
/// grid order.
SweepResult sweep(const std::vector<DesignPoint>& grid,
                  const SweepEvaluator& evaluator, int workers = 1);

/// Indices of non-dominated points under (maximize first, minimize
/// second); a point is dominated when another is >= / <= with at least one
/// strict.  Ties are kept; indices come back in input order.
std::vector<std::size_t> pareto_front(
    const std::vector<std::pair<double, double>>& points);

}  // namespace boed

#endif
