#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <hdivflow/analysis.hpp>

#include "run_config.hpp"

namespace hdivflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitSolverFailure = 3;

SolveOptions solve_options(const RunConfig& config);

/// Runs one configured command. Artifacts go to config.out (stdout when
/// empty; a directory for `tables`). Exceptions propagate.
int run(const RunConfig& config, std::ostream& out);

/// Full front end: parses flags (and --config), then runs, mapping errors to
/// exit codes.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomised invariant suite; identical seeds give identical outcomes.
std::vector<CheckOutcome> run_property_checks(std::uint64_t seed);

}  // namespace hdivflow::cli
