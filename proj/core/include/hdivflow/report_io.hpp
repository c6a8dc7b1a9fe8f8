#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdivflow/analysis.hpp"

namespace hdivflow {

/// Header:
/// h,n_dofs,vel_l2_rel,vel_rate,pres_l2_rel,pres_rate,jump_seminorm,proj_pres_error,div_l2
/// Rates are empty on the first row, missing values are empty fields. With
/// `timing`, a trailing wall_seconds column is added.
void write_convergence_csv(const ConvergenceTable& table, std::ostream& out, bool timing = false);

/// Rows `| 1/N | err (rate) | err (rate) |`, optionally followed by a local
/// wall-time column.
void write_convergence_markdown(const ConvergenceTable& table, const std::string& title,
                                std::ostream& out, bool timing = false);

/// One row of a parameter sweep comparing BDM_1/P_0 with RT_1/P_1dc.
struct SweepRow {
  std::string parameter;
  double bdm_vel = 0.0;
  double bdm_pres = 0.0;
  double rt_vel = 0.0;
  double rt_pres = 0.0;
  double wall_seconds = 0.0;
};

/// Header: <name>,bdm_vel_l2_rel,bdm_pres_l2_rel,rt_vel_l2_rel,rt_pres_l2_rel
void write_sweep_csv(const std::string& parameter_name, const std::vector<SweepRow>& rows,
                     std::ostream& out, bool timing = false);
void write_sweep_markdown(const std::string& parameter_name, const std::vector<SweepRow>& rows,
                          const std::string& title, std::ostream& out, bool timing = false);

/// `key: value` lines.
void write_error_report(const ErrorReport& report, std::ostream& out);

/// Shortest round-trip text of a double.
std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

}  // namespace hdivflow
