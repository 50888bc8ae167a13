#ifndef BOED_STUDIES_HPP
#define BOED_STUDIES_HPP

#include "boed/config.hpp"

namespace boed {

struct StudyResult {
  Table table;
  std::string summary;  // one line for standard output
};

/// Executes the configured study and returns its table plus a one-line
/// summary.  Throws on unrecoverable errors; per-design failures inside
/// sweeps are recorded in the table instead.
StudyResult run_study(const RunConfig& cfg);

}  // namespace boed

#endif
