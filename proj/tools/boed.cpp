#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boed/errors.hpp"
#include "boed/studies.hpp"

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 I/O or unexpected failure, 2 config schema or "
    "invariant violation, 3 model instability, 4 solver non-convergence.";

// Pull dotted override flags ("--sim.seed 7" or "--sim.seed=7") out of the
// argument list before CLI11 sees it.
std::vector<std::string> extract_overrides(std::vector<std::string>& args) {
  std::vector<std::string> overrides;
  std::vector<std::string> remaining;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0 && a.find('.') != std::string::npos) {
      std::string body = a.substr(2);
      if (body.find('=') != std::string::npos) {
        overrides.push_back(body);
      } else if (i + 1 < args.size()) {
        overrides.push_back(body + "=" + args[i + 1]);
        ++i;
      } else {
        overrides.push_back(body + "=");
      }
      continue;
    }
    remaining.push_back(a);
  }
  args = std::move(remaining);
  return overrides;
}

int run_validate(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 1;
  }
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    std::cerr << config_path << ": not valid JSON\n";
    return 2;
  }
  std::vector<std::string> issues = boed::validate_config_json(j);
  if (issues.empty()) {
    std::cout << config_path << ": 0 issues\n";
    return 0;
  }
  std::cout << config_path << ": " << issues.size() << " issue"
            << (issues.size() == 1 ? "" : "s") << "\n";
  for (const auto& issue : issues) std::cout << "  - " << issue << "\n";
  return 2;
}

int run_with_config(const std::string& study, const std::string& config_path,
                    const std::vector<std::string>& overrides,
                    const std::string& output_path,
                    const std::string& output_format, int workers) {
  try {
    std::vector<std::string> all = overrides;
    all.push_back("study=" + study);
    if (workers > 0) all.push_back("workers=" + std::to_string(workers));
    boed::RunConfig cfg = boed::load_config(config_path, all);
    if (!output_path.empty()) cfg.output.path = output_path;
    if (!output_format.empty()) cfg.output.format = output_format;

    boed::StudyResult res = boed::run_study(cfg);
    res.table.write(cfg.output);
    std::cout << res.summary << "\n";
    return 0;
  } catch (const boed::StabilityError& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << "\n";
    return 3;
  } catch (const boed::ConvergenceError& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << "\n";
    return 4;
  } catch (const boed::Error& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> overrides = extract_overrides(args);

  CLI::App app{
      "Bayesian optimal experimental design criteria (EIG, EGIG, EDI) for "
      "linear-Gaussian state-space models."};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string output_format;
  int workers = 0;

  const std::vector<std::string> studies = {
      "eig", "egig", "edi", "delta-edi", "smd-study", "f16-study", "oracle"};
  std::string chosen;
  for (const auto& study : studies) {
    CLI::App* sub = app.add_subcommand(study, "Run the " + study + " study");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--output", output_path, "Output table path");
    sub->add_option("--format", output_format, "csv or json");
    sub->add_option("--workers", workers, "Parallel sweep workers");
    sub->callback([&chosen, study] { chosen = study; });
  }
  CLI::App* validate = app.add_subcommand("validate",
                                          "Check a config file, report all "
                                          "schema and invariant violations");
  validate->add_option("--config", config_path, "JSON config file")
      ->required();
  validate->callback([&chosen] { chosen = "validate"; });

  try {
    std::vector<const char*> cargs;
    cargs.push_back("boed");
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()),
              const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (chosen == "validate") return run_validate(config_path);
  return run_with_config(chosen, config_path, overrides, output_path,
                         output_format, workers);
}
