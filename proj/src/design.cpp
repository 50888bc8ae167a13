#include "boed/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "boed/errors.hpp"

namespace boed {

namespace {

void check_physical(const SpringMassParams& p) {
  // The coupling spring k2 may vanish (decoupled masses); the grounded
  // springs must stay positive.
  if (p.m1 <= 0 || p.m2 <= 0 || p.k1 <= 0 || p.k2 < 0 || p.k3 <= 0)
    throw Error("spring-mass: masses and stiffnesses must be positive");
  if (p.b1 < 0 || p.b2 < 0 || p.b3 < 0)
    throw Error("spring-mass: damping must be nonnegative");
  if (p.dt <= 0) throw Error("spring-mass: dt must be positive");
  if (p.q_scale < 0 || p.r_scale <= 0)
    throw Error("spring-mass: q_scale >= 0 and r_scale > 0 required");
}

}  // namespace

CtlsModel build_two_mass(const SpringMassParams& p) {
  check_physical(p);
  CtlsModel c;
  c.Ac = Matrix::Zero(4, 4);
  c.Ac(0, 2) = 1.0;
  c.Ac(1, 3) = 1.0;
  c.Ac.row(2) << -(p.k1 + p.k2) / p.m1, p.k2 / p.m1, -(p.b1 + p.b2) / p.m1,
      p.b2 / p.m1;
  c.Ac.row(3) << p.k2 / p.m2, -(p.k2 + p.k3) / p.m2, p.b2 / p.m2,
      -(p.b2 + p.b3) / p.m2;
  c.C = observer_smd(0.0);
  c.dt = p.dt;
  c.Qd = Matrix::Zero(4, 4);
  c.Qd(2, 2) = p.q_scale;
  c.Qd(3, 3) = p.q_scale;
  c.Rd = Matrix::Constant(1, 1, p.r_scale);
  // With zero damping the system is marginally stable by construction; the
  // strict-stability gate is enforced by the downstream solvers instead.
  return c;
}

CtlsModel build_one_mass(const SpringMassParams& p) {
  check_physical(p);
  CtlsModel c;
  c.Ac = Matrix::Zero(2, 2);
  c.Ac(0, 1) = 1.0;
  c.Ac.row(1) << -(p.k1 + p.k2) / p.m1, -(p.b1 + p.b2) / p.m1;
  c.C = observer_smd_reduced(0.0);
  c.dt = p.dt;
  c.Qd = Matrix::Zero(2, 2);
  c.Qd(1, 1) = p.q_scale;
  c.Rd = Matrix::Constant(1, 1, p.r_scale);
  return c;
}

RowVector observer_smd(double d) {
  if (d < 0.0 || d > M_PI / 2.0 + 1e-12)
    throw Error("observer_smd: d must lie in [0, pi/2]");
  RowVector h(4);
  h << std::cos(d), 0.0, std::sin(d), 0.0;
  return h;
}

RowVector observer_smd_reduced(double d) {
  if (d < 0.0 || d > M_PI / 2.0 + 1e-12)
    throw Error("observer_smd_reduced: d must lie in [0, pi/2]");
  RowVector h(2);
  h << std::cos(d), std::sin(d);
  return h;
}

CtlsModel build_f16_surrogate() {
  // Representative reduced longitudinal closed-loop dynamics, state order
  // (theta, V, alpha, theta_dot).  Values are a stand-in tuned for
  // stability and observability, not a published trim linearization.  The
  // only built-in sensor is a noisy airspeed reading; pitch, attack angle,
  // and pitch rate are reachable only through the designed extra output,
  // which is what makes the output design problem non-trivial.
  CtlsModel c;
  c.Ac = Matrix::Zero(4, 4);
  c.Ac.row(0) << 0.0, 0.0, 0.0, 1.0;
  c.Ac.row(1) << -9.8, -0.32, 0.05, 0.0;
  c.Ac.row(2) << 0.0, -0.0025, -0.3, 0.05;
  c.Ac.row(3) << -0.8, 0.0, -0.3, -1.0;
  c.C = Matrix::Zero(1, 4);
  c.C(0, 1) = 1.0;  // V
  c.dt = 0.05;
  c.Qd = Matrix::Zero(4, 4);
  c.Qd.diagonal() << 0.01, 0.01, 0.002, 0.01;
  c.Rd = Matrix::Constant(1, 1, 0.25);
  return c;
}

RowVector observer_f16(double d1, double d2) {
  double rest = 1.0 - d1 * d1 - d2 * d2;
  if (rest < -1e-12)
    throw Error("observer_f16: d1^2 + d2^2 must not exceed 1");
  double d3 = std::sqrt(std::max(0.0, rest));  // nonnegative root
  RowVector h(4);
  h << d1, 0.0, d2, d3;
  return h;
}

Matrix apply_perturbation(const Matrix& a, const PerturbationSpec& spec) {
  if (spec.delta.rows() != a.rows() || spec.delta.cols() != a.cols())
    throw DimensionError("apply_perturbation: Delta dimensions mismatch");
  Matrix perturbed = a + spec.delta.cwiseProduct(a);
  require_stable(perturbed, "apply_perturbation");
  return perturbed;
}

double egig_sensitivity(const std::function<double(const Matrix&)>& objective,
                        Eigen::Index n, double step) {
  if (step <= 0) throw Error("egig_sensitivity: step must be positive");
  Matrix grad(n, n);
  Matrix delta = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      delta(i, j) = step;
      double hi = objective(delta);
      delta(i, j) = -step;
      double lo = objective(delta);
      delta(i, j) = 0.0;
      grad(i, j) = (hi - lo) / (2.0 * step);
    }
  }
  return grad.norm();
}

SweepResult sweep(const std::vector<DesignPoint>& grid,
                  const SweepEvaluator& evaluator, int workers) {
  if (grid.empty()) throw Error("sweep: empty design grid");
  SweepResult result;
  result.records.resize(grid.size());

  auto eval_one = [&](std::size_t i) {
    SweepRecord& rec = result.records[i];
    rec.point = grid[i];
    try {
      auto [criteria, extras] = evaluator(grid[i]);
      rec.criteria = criteria;
      rec.extras = std::move(extras);
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  };

  if (workers <= 1 || grid.size() < 2) {
    for (std::size_t i = 0; i < grid.size(); ++i) eval_one(i);
    return result;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < grid.size();
         i = next.fetch_add(1))
      eval_one(i);
  };
  std::vector<std::thread> pool;
  int count = std::min<int>(workers, static_cast<int>(grid.size()));
  pool.reserve(count);
  for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return result;
}

std::vector<std::size_t> pareto_front(
    const std::vector<std::pair<double, double>>& points) {
  if (points.empty()) throw Error("pareto_front: empty point set");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Descending objective 1; groups of equal objective 1 are handled
  // together so that equal points survive as ties.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].first > points[b].first;
  });

  std::vector<bool> keep(points.size(), false);
  double best2 = std::numeric_limits<double>::infinity();  // over strictly higher obj1
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double group_min2 = std::numeric_limits<double>::infinity();
    while (j < order.size() &&
           points[order[j]].first == points[order[i]].first) {
      group_min2 = std::min(group_min2, points[order[j]].second);
      ++j;
    }
    for (std::size_t k = i; k < j; ++k) {
      double o2 = points[order[k]].second;
      if (o2 < best2 && o2 <= group_min2) keep[order[k]] = true;
    }
    best2 = std::min(best2, group_min2);
    i = j;
  }
  std::vector<std::size_t> front;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (keep[k]) front.push_back(k);
  return front;
}

}  // namespace boed
