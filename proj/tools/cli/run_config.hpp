#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <hdivflow/assembly.hpp>
#include <hdivflow/mesh.hpp>
#include <hdivflow/problems.hpp>

namespace hdivflow::cli {

enum class Command { solve, convergence, tables, check };
enum class OutputFormat { text, csv, markdown };
enum class ProblemKind { vortex, shear, reaction };

Command parse_command(std::string_view s);
std::string_view to_string(Command c);
OutputFormat parse_format(std::string_view s);
std::string_view to_string(OutputFormat f);
ProblemKind parse_problem(std::string_view s);
std::string_view to_string(ProblemKind p);

struct RunConfig {
  Command command = Command::solve;
  ProblemKind problem = ProblemKind::vortex;
  int n = 1;
  double sigma = 100.0;
  ShearProfile profile = ShearProfile::sine;
  ElementPair element = ElementPair::bdm1p0;
  std::vector<int> cells = {10, 20, 40, 80};  ///< N list; solve uses the first entry
  MeshPattern pattern = MeshPattern::union_jack;
  std::optional<QuadratureConfig> quad;  ///< unset: per-element default
  double tolerance = 1e-10;
  std::string out;  ///< file (solve, convergence, check) or directory (tables)
  std::optional<OutputFormat> format;  ///< unset: text for solve/check, csv otherwise
  std::uint64_t seed = 42;
  std::string which = "all";  ///< tables: 1, 2, 3, 4 or all
  bool timing = false;

  OutputFormat effective_format() const;
  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Applies one `key = value` setting; keys mirror the long flag names
/// (command, problem, n, sigma, profile, element, N, h-list, pattern,
/// quad-degree, tol, out, format, seed, which, timing).
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat key/value text: one `key = value` per line, `#` starts a comment.
void read_config(RunConfig& config, std::istream& in);
void read_config_file(RunConfig& config, const std::string& path);
/// Every key, in a form read_config accepts.
void write_config(const RunConfig& config, std::ostream& out);

/// "10,20,40" -> {10, 20, 40}.
std::vector<int> parse_int_list(std::string_view s);
/// "1/10,0.05" -> {10, 20}; each h must be the reciprocal of an integer.
std::vector<int> parse_h_list(std::string_view s);
/// "8" (edge degree 7) or "8,7".
QuadratureConfig parse_quad_degree(std::string_view s);

ProblemSpec make_problem(const RunConfig& config);

}  // namespace hdivflow::cli
