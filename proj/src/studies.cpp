#include "boed/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boed/errors.hpp"

namespace boed {

namespace {

const LtiModel& require_model(const RunConfig& cfg) {
  if (!cfg.model) throw Error("study requires a 'model' definition");
  return *cfg.model;
}

ModelPair require_pair(const RunConfig& cfg) {
  if (!cfg.model || !cfg.model_star)
    throw Error("study requires 'model' and 'model_star' definitions");
  return make_pair(*cfg.model, *cfg.model_star);
}

StudyResult run_eig(const RunConfig& cfg) {
  const LtiModel& m = require_model(cfg);
  GaussianBelief prior = predict(m, m.init);
  double single = eig_single_step(m, prior);
  double infinite = eig_infinite_horizon(solve_dare(m));

  StudyResult res;
  res.table.columns = {"eig", "eig_infinite"};
  res.table.rows.push_back({single, infinite});
  std::ostringstream s;
  s << "eig=" << format_double(single)
    << " eig_infinite=" << format_double(infinite);
  res.summary = s.str();
  return res;
}

StudyResult run_egig(const RunConfig& cfg) {
  ModelPair pair = require_pair(cfg);
  GaussianBelief prior = predict(pair.inference, pair.inference.init);
  GaussianBelief prior_star = predict(pair.truth, pair.truth.init);
  double single = egig_single_step(pair, prior, prior_star);

  StationaryQuantities sq = solve_dare(pair.inference);
  StationaryQuantities sq_star = solve_dare(pair.truth);
  JointStationaryMoments joint = joint_moments(pair, sq, sq_star);
  double infinite = egig_infinite_horizon(pair, joint, sq, sq_star);

  StudyResult res;
  res.table.columns = {"egig", "egig_infinite"};
  res.table.rows.push_back({single, infinite});
  std::ostringstream s;
  s << "egig=" << format_double(single)
    << " egig_infinite=" << format_double(infinite);
  res.summary = s.str();
  return res;
}

StudyResult run_edi(const RunConfig& cfg) {
  ModelPair pair = require_pair(cfg);
  GaussianBelief prior = predict(pair.inference, pair.inference.init);
  GaussianBelief prior_star = predict(pair.truth, pair.truth.init);
  double value = edi_single_step(pair, prior, prior_star);

  StudyResult res;
  res.table.columns = {"edi"};
  res.table.rows.push_back({value});
  res.summary = "edi=" + format_double(value);
  return res;
}

StudyResult run_delta_edi(const RunConfig& cfg) {
  ModelPair pair = require_pair(cfg);
  StationaryQuantities sq = solve_dare(pair.inference);
  StationaryQuantities sq_star = solve_dare(pair.truth);
  JointStationaryMoments joint = joint_moments(pair, sq, sq_star);
  double value = delta_edi(pair, joint, sq, sq_star);

  StudyResult res;
  res.table.columns = {"delta_edi"};
  res.table.rows.push_back({value});
  res.summary = "delta_edi=" + format_double(value);
  return res;
}

StudyResult run_smd_study(const RunConfig& cfg) {
  const std::vector<double> designs = cfg.design_grid.values();
  const std::vector<double> k3_values = cfg.k3_grid.values();
  const SpringMassParams base = cfg.smd;

  std::vector<DesignPoint> grid;
  grid.reserve(designs.size());
  for (double d : designs) {
    DesignPoint pt;
    pt.params = Vector::Constant(1, d);
    pt.label = "d=" + format_double(d);
    grid.push_back(std::move(pt));
  }

  SweepEvaluator evaluator = [&](const DesignPoint& pt) {
    double d = pt.params[0];
    SpringMassParams p = base;
    CtlsModel one = build_one_mass(p);
    one.C = observer_smd_reduced(d);
    LtiModel inference = discretize(one);
    StationaryQuantities sq = solve_dare(inference);
    double eig = eig_infinite_horizon(sq);

    // Delta_EDI averaged over the prior range of k3 stiffness values; the
    // inference model stays the one-mass reduction.
    double sum = 0.0;
    for (double k3 : k3_values) {
      SpringMassParams pk = base;
      pk.k3 = k3 * base.k1;
      CtlsModel two = build_two_mass(pk);
      two.C = observer_smd(d);
      LtiModel truth = discretize(two);
      ModelPair pair = make_pair(inference, truth);
      StationaryQuantities sq_star = solve_dare(truth);
      JointStationaryMoments joint = joint_moments(pair, sq, sq_star);
      sum += delta_edi(pair, joint, sq, sq_star);
    }
    CriteriaRecord rec;
    rec.eig = eig;
    rec.delta_edi = sum / k3_values.size();
    return std::make_pair(rec, std::map<std::string, double>{});
  };

  SweepResult swept = sweep(grid, evaluator, cfg.workers);

  std::vector<std::pair<double, double>> objectives;
  std::size_t best = 0;
  for (std::size_t i = 0; i < swept.records.size(); ++i) {
    const SweepRecord& r = swept.records[i];
    if (!r.ok) continue;
    // maximize EIG, maximize discrimination (min of the negation)
    objectives.push_back({r.criteria.eig, -r.criteria.delta_edi});
    if (r.criteria.eig > swept.records[best].criteria.eig) best = i;
  }
  std::vector<std::size_t> front =
      objectives.empty() ? std::vector<std::size_t>{}
                         : pareto_front(objectives);

  StudyResult res;
  res.table.columns = {"d", "eig", "delta_edi_mean", "error"};
  for (const SweepRecord& r : swept.records) {
    if (r.ok)
      res.table.rows.push_back({r.point.params[0], r.criteria.eig,
                                r.criteria.delta_edi, std::string()});
    else
      res.table.rows.push_back({r.point.params[0],
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                r.error});
  }
  std::ostringstream s;
  s << "argmax_eig d=" << format_double(swept.records[best].point.params[0])
    << " eig=" << format_double(swept.records[best].criteria.eig)
    << " pareto_size=" << front.size();
  res.summary = s.str();
  return res;
}

StudyResult run_f16_study(const RunConfig& cfg) {
  CtlsModel base = build_f16_surrogate();
  const int count = cfg.f16_grid;
  if (count < 2) throw Error("f16-study: grid_count must be >= 2");

  std::vector<DesignPoint> grid;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      double d1 = -1.0 + 2.0 * i / (count - 1);
      double d2 = -1.0 + 2.0 * j / (count - 1);
      if (d1 * d1 + d2 * d2 > 1.0 + 1e-12) continue;  // unit-disk designs
      DesignPoint pt;
      pt.params = Vector(2);
      pt.params << d1, d2;
      grid.push_back(std::move(pt));
    }
  }

  SweepEvaluator evaluator = [&](const DesignPoint& pt) {
    CtlsModel c = base;
    RowVector extra = observer_f16(pt.params[0], pt.params[1]);
    Matrix h(base.C.rows() + 1, base.C.cols());
    h.topRows(base.C.rows()) = base.C;
    h.bottomRows(1) = extra;
    c.C = h;
    // Keep the surrogate's built-in sensor noise; the designed output gets
    // its own (independent, tighter) channel.
    Matrix rd = Matrix::Zero(h.rows(), h.rows());
    rd.topLeftCorner(base.Rd.rows(), base.Rd.cols()) = base.Rd;
    rd(h.rows() - 1, h.rows() - 1) = 0.01;
    c.Rd = rd;
    LtiModel inference = discretize(c);
    StationaryQuantities sq = solve_dare(inference);
    double eig = eig_infinite_horizon(sq);

    auto objective = [&](const Matrix& delta) {
      Matrix a_star = apply_perturbation(inference.A, PerturbationSpec{delta});
      LtiModel truth = make_lti(a_star, inference.H, inference.Q,
                                inference.R, inference.init);
      ModelPair pair = make_pair(inference, truth);
      StationaryQuantities sq_star = solve_dare(truth);
      JointStationaryMoments joint = joint_moments(pair, sq, sq_star);
      return egig_infinite_horizon(pair, joint, sq, sq_star);
    };
    double sens =
        egig_sensitivity(objective, inference.state_dim(), cfg.fd_step);

    CriteriaRecord rec;
    rec.eig = eig;
    std::map<std::string, double> extras;
    extras["egig_sensitivity"] = sens;
    extras["d3"] = extra[3];
    return std::make_pair(rec, extras);
  };

  SweepResult swept = sweep(grid, evaluator, cfg.workers);

  std::vector<std::pair<double, double>> objectives;
  std::vector<std::size_t> ok_index;
  std::size_t best = 0;
  for (std::size_t i = 0; i < swept.records.size(); ++i) {
    const SweepRecord& r = swept.records[i];
    if (!r.ok) continue;
    objectives.push_back({r.criteria.eig, r.extras.at("egig_sensitivity")});
    ok_index.push_back(i);
    if (r.criteria.eig > swept.records[best].criteria.eig) best = i;
  }
  std::vector<bool> on_front(swept.records.size(), false);
  if (!objectives.empty())
    for (std::size_t k : pareto_front(objectives)) on_front[ok_index[k]] = true;

  StudyResult res;
  res.table.columns = {"d1", "d2", "d3", "eig", "egig_sensitivity",
                       "pareto", "error"};
  std::size_t front_size = 0;
  for (std::size_t i = 0; i < swept.records.size(); ++i) {
    const SweepRecord& r = swept.records[i];
    if (r.ok) {
      front_size += on_front[i] ? 1 : 0;
      res.table.rows.push_back({r.point.params[0], r.point.params[1],
                                r.extras.at("d3"), r.criteria.eig,
                                r.extras.at("egig_sensitivity"),
                                static_cast<double>(on_front[i] ? 1 : 0),
                                std::string()});
    } else {
      res.table.rows.push_back({r.point.params[0], r.point.params[1],
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), 0.0,
                                r.error});
    }
  }
  std::ostringstream s;
  s << "argmax_eig d1=" << format_double(swept.records[best].point.params[0])
    << " d2=" << format_double(swept.records[best].point.params[1])
    << " pareto_size=" << front_size;
  res.summary = s.str();
  return res;
}

StudyResult run_oracle(const RunConfig& cfg) {
  ModelPair pair = require_pair(cfg);
  const bool same_dim =
      pair.inference.state_dim() == pair.truth.state_dim();
  GaussianBelief prior = predict(pair.inference, pair.inference.init);
  GaussianBelief prior_star = predict(pair.truth, pair.truth.init);

  StudyResult res;
  res.table.columns = {"criterion", "closed_form", "mc_mean", "mc_stderr"};
  auto add = [&](const std::string& name, double closed,
                 const McEstimate& mc) {
    res.table.rows.push_back({name, closed, mc.mean, mc.std_error});
  };

  add("eig_single_step", eig_single_step(pair.inference, prior),
      mc_eig_single_step(pair.inference, prior, cfg.sim));
  if (same_dim)
    add("egig_single_step", egig_single_step(pair, prior, prior_star),
        mc_egig_single_step(pair, prior, prior_star, cfg.sim));

  SimConfig traj = cfg.sim;
  traj.n_samples = std::min(cfg.sim.n_samples, 200);
  StationaryQuantities sq = solve_dare(pair.inference);
  StationaryQuantities sq_star = solve_dare(pair.truth);
  JointStationaryMoments joint = joint_moments(pair, sq, sq_star);
  add("delta_edi", delta_edi(pair, joint, sq, sq_star),
      mc_delta_edi(pair, traj));
  if (same_dim)
    add("egig_infinite_horizon",
        egig_infinite_horizon(pair, joint, sq, sq_star),
        mc_egig_infinite_horizon(pair, traj));

  std::ostringstream s;
  s << res.table.rows.size() << " oracle comparisons, seed " << cfg.sim.seed;
  res.summary = s.str();
  return res;
}

}  // namespace

StudyResult run_study(const RunConfig& cfg) {
  if (cfg.study == "eig") return run_eig(cfg);
  if (cfg.study == "egig") return run_egig(cfg);
  if (cfg.study == "edi") return run_edi(cfg);
  if (cfg.study == "delta-edi") return run_delta_edi(cfg);
  if (cfg.study == "smd-study") return run_smd_study(cfg);
  if (cfg.study == "f16-study") return run_f16_study(cfg);
  if (cfg.study == "oracle") return run_oracle(cfg);
  throw Error("unknown study '" + cfg.study + "'");
}

}  // namespace boed
