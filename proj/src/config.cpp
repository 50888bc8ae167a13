#include "boed/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "boed/errors.hpp"

namespace boed {

using nlohmann::json;

std::vector<double> GridSpec::values() const {
  if (count < 1) throw Error("grid: count must be >= 1");
  std::vector<double> v;
  v.reserve(count);
  if (count == 1) {
    v.push_back(lo);
    return v;
  }
  if (log) {
    if (lo <= 0 || hi <= 0) throw Error("grid: log spacing needs positive endpoints");
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
      v.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
  } else {
    for (int i = 0; i < count; ++i)
      v.push_back(lo + (hi - lo) * i / (count - 1));
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(field + ": expected an array of row arrays");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error(field + ": ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw Error(field + ": non-numeric matrix entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw Error(field + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(field + ": non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

json lti_to_json(const LtiModel& m) {
  json j;
  j["A"] = matrix_to_json(m.A);
  j["H"] = matrix_to_json(m.H);
  j["Q"] = matrix_to_json(m.Q);
  j["R"] = matrix_to_json(m.R);
  j["mu0"] = vector_to_json(m.init.mean);
  j["sigma0"] = matrix_to_json(m.init.cov);
  return j;
}

LtiModel lti_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw Error(field + ": expected an object");

  Matrix a, h, q, r;
  if (j.contains("Ac")) {
    CtlsModel c;
    c.Ac = matrix_from_json(j.at("Ac"), field + ".Ac");
    c.C = matrix_from_json(j.at("C"), field + ".C");
    if (!j.contains("dt") || !j.at("dt").is_number())
      throw Error(field + ".dt: required for a continuous-time model");
    c.dt = j.at("dt").get<double>();
    c.Qd = matrix_from_json(j.at("Qd"), field + ".Qd");
    c.Rd = matrix_from_json(j.at("Rd"), field + ".Rd");
    a = expm(c.Ac * c.dt);
    h = c.C;
    q = c.Qd;
    r = c.Rd;
    if (c.dt <= 0) throw Error(field + ".dt: must be positive");
  } else {
    a = matrix_from_json(j.at("A"), field + ".A");
    h = matrix_from_json(j.at("H"), field + ".H");
    q = matrix_from_json(j.at("Q"), field + ".Q");
    r = matrix_from_json(j.at("R"), field + ".R");
  }

  const Eigen::Index n = a.rows();
  GaussianBelief init{Vector::Zero(n), Matrix::Identity(n, n)};
  if (j.contains("mu0")) init.mean = vector_from_json(j.at("mu0"), field + ".mu0");
  if (j.contains("sigma0"))
    init.cov = matrix_from_json(j.at("sigma0"), field + ".sigma0");
  return make_lti(a, h, q, r, make_belief(init.mean, init.cov));
}

void apply_override(json& j, const std::string& key_eq_value) {
  auto eq = key_eq_value.find('=');
  if (eq == std::string::npos)
    throw Error("override '" + key_eq_value + "' is not key=value");
  std::string key = key_eq_value.substr(0, eq);
  std::string value = key_eq_value.substr(eq + 1);

  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    auto dot = key.find('.', pos);
    std::string part = key.substr(pos, dot == std::string::npos
                                           ? std::string::npos
                                           : dot - pos);
    if (part.empty()) throw Error("override '" + key + "' has an empty segment");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

namespace {

const std::vector<std::string> kStudies = {
    "eig", "egig", "edi", "delta-edi", "smd-study", "f16-study", "oracle"};

bool known_study(const std::string& s) {
  for (const auto& k : kStudies)
    if (k == s) return true;
  return false;
}

void validate_model_json(const json& j, const std::string& field,
                         std::vector<std::string>& issues) {
  try {
    LtiModel m = lti_from_json(j, field);
    try {
      double rho = spectral_radius(m.A);
      if (!(rho < 1.0 - kStabilityMargin)) {
        std::ostringstream msg;
        msg << field << ".A: spectral radius " << rho
            << " fails the stability gate (asymptotic studies need < 1)";
        issues.push_back(msg.str());
      }
    } catch (const std::exception& e) {
      issues.push_back(field + ".A: spectral radius check failed: " + e.what());
    }
  } catch (const std::exception& e) {
    issues.push_back(e.what());
  }
}

}  // namespace

std::vector<std::string> validate_config_json(const json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) {
    issues.push_back("config root must be a JSON object");
    return issues;
  }
  if (!j.contains("study") || !j.at("study").is_string())
    issues.push_back("study: required string field");
  else if (!known_study(j.at("study").get<std::string>()))
    issues.push_back("study: unknown study '" +
                     j.at("study").get<std::string>() + "'");

  const std::string study =
      j.value("study", std::string());
  const bool needs_pair = study == "egig" || study == "edi" ||
                          study == "delta-edi" || study == "oracle";
  const bool needs_model = needs_pair || study == "eig";

  if (j.contains("model"))
    validate_model_json(j.at("model"), "model", issues);
  else if (needs_model)
    issues.push_back("model: required for study '" + study + "'");

  if (j.contains("model_star"))
    validate_model_json(j.at("model_star"), "model_star", issues);
  else if (needs_pair)
    issues.push_back("model_star: required for study '" + study + "'");

  if (j.contains("model") && j.contains("model_star")) {
    try {
      make_pair(lti_from_json(j.at("model"), "model"),
                lti_from_json(j.at("model_star"), "model_star"));
    } catch (const DimensionError& e) {
      issues.push_back(e.what());
    } catch (const std::exception&) {
      // already reported above
    }
  }

  if (j.contains("output")) {
    std::string fmt = j.at("output").value("format", "csv");
    if (fmt != "csv" && fmt != "json")
      issues.push_back("output.format: must be 'csv' or 'json'");
  }
  if (j.contains("sim")) {
    const json& sim = j.at("sim");
    if (sim.value("n_samples", 1) < 1)
      issues.push_back("sim.n_samples: must be >= 1");
    if (sim.value("burn_in", 0) >= sim.value("horizon", 1))
      issues.push_back("sim.burn_in: must be below sim.horizon");
  }
  return issues;
}

RunConfig config_from_json(const json& j) {
  std::vector<std::string> issues = validate_config_json(j);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& issue : issues) msg << "\n  - " << issue;
    throw Error(msg.str());
  }

  RunConfig cfg;
  cfg.raw = j;
  cfg.study = j.at("study").get<std::string>();
  if (j.contains("model")) cfg.model = lti_from_json(j.at("model"), "model");
  if (j.contains("model_star"))
    cfg.model_star = lti_from_json(j.at("model_star"), "model_star");

  if (j.contains("sim")) {
    const json& sim = j.at("sim");
    cfg.sim.seed = sim.value("seed", std::uint64_t{0});
    cfg.sim.n_samples = sim.value("n_samples", cfg.sim.n_samples);
    cfg.sim.horizon = sim.value("horizon", cfg.sim.horizon);
    cfg.sim.burn_in = sim.value("burn_in", cfg.sim.burn_in);
  }
  if (j.contains("output")) {
    cfg.output.path = j.at("output").value("path", cfg.output.path);
    cfg.output.format = j.at("output").value("format", cfg.output.format);
  }
  if (j.contains("smd")) {
    const json& s = j.at("smd");
    SpringMassParams& p = cfg.smd;
    p.m1 = s.value("m1", p.m1);
    p.m2 = s.value("m2", p.m2);
    p.k1 = s.value("k1", p.k1);
    p.k2 = s.value("k2", p.k2);
    p.k3 = s.value("k3", p.k3);
    p.b1 = s.value("b1", p.b1);
    p.b2 = s.value("b2", p.b2);
    p.b3 = s.value("b3", p.b3);
    p.dt = s.value("dt", p.dt);
    p.q_scale = s.value("q_scale", p.q_scale);
    p.r_scale = s.value("r_scale", p.r_scale);
  }
  auto read_grid = [&](const char* key, GridSpec& g) {
    if (!j.contains(key)) return;
    const json& gj = j.at(key);
    g.lo = gj.value("min", g.lo);
    g.hi = gj.value("max", g.hi);
    g.count = gj.value("count", g.count);
    g.log = gj.value("log", g.log);
  };
  read_grid("k3_grid", cfg.k3_grid);
  read_grid("design_grid", cfg.design_grid);
  if (j.contains("f16")) {
    cfg.f16_grid = j.at("f16").value("grid_count", cfg.f16_grid);
    cfg.fd_step = j.at("f16").value("fd_step", cfg.fd_step);
  }
  cfg.workers = j.value("workers", cfg.workers);
  return cfg;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config '" + path + "' is not valid JSON: " + e.what());
  }
  for (const auto& ov : overrides) apply_override(j, ov);
  return config_from_json(j);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      if (std::holds_alternative<double>(row[c]))
        out << format_double(std::get<double>(row[c]));
      else
        out << std::get<std::string>(row[c]);
    }
    out << "\n";
  }
  return out.str();
}

std::string Table::to_json() const {
  json arr = json::array();
  for (const auto& row : rows) {
    json rec;
    for (std::size_t c = 0; c < row.size() && c < columns.size(); ++c) {
      if (std::holds_alternative<double>(row[c]))
        rec[columns[c]] = std::get<double>(row[c]);
      else
        rec[columns[c]] = std::get<std::string>(row[c]);
    }
    arr.push_back(std::move(rec));
  }
  return arr.dump(2) + "\n";
}

void Table::write(const OutputSpec& out) const {
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw Error("cannot write output file '" + out.path + "'");
  f << (out.format == "json" ? to_json() : to_csv());
}

}  // namespace boed
