#ifndef BOED_CONFIG_HPP
#define BOED_CONFIG_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "boed/design.hpp"
#include "boed/oracle.hpp"

namespace boed {

struct OutputSpec {
  std::string path = "boed_out.csv";
  std::string format = "csv";  // csv | json
};

/// Inclusive 1-D grid; log-spaced grids require positive endpoints.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  bool log = false;

  std::vector<double> values() const;
};

/// Fully resolved run configuration; `raw` keeps the merged JSON for the
/// per-record input echo.
struct RunConfig {
  std::string study;
  std::optional<LtiModel> model;
  std::optional<LtiModel> model_star;
  SimConfig sim;
  OutputSpec output;
  SpringMassParams smd;
  GridSpec k3_grid{1.0, 100.0, 10, true};
  GridSpec design_grid{0.0, 1.5707963267948966, 50, false};
  int f16_grid = 21;
  double fd_step = 1e-5;
  double f16_delta_probe = 0.0;  // reserved for nonzero-center sensitivity
  int workers = 1;
  nlohmann::json raw;
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);

/// {A, H, Q, R, mu0, sigma0}; mu0/sigma0 default to zero / identity.
/// A continuous-time block {Ac, C, dt, Qd, Rd} is discretized on load.
nlohmann::json lti_to_json(const LtiModel& m);
LtiModel lti_from_json(const nlohmann::json& j, const std::string& field);

/// Applies a dotted-path override "a.b.c=value" to parsed JSON; the value
/// is parsed as JSON when possible, kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& key_eq_value);

/// Collects every schema/invariant violation (not just the first),
/// including per-model stability-gate results.
std::vector<std::string> validate_config_json(const nlohmann::json& j);

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides);

/// Tabular study output.  Numbers print with 17 significant digits so a
/// parsed CSV recovers every double exactly.
struct Table {
  using Cell = std::variant<double, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
  std::string to_json() const;
  void write(const OutputSpec& out) const;
};

std::string format_double(double v);  // %.17g

}  // namespace boed

#endif
