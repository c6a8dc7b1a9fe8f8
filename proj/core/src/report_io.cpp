#include "hdivflow/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>

namespace hdivflow {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

namespace {

// Three significant digits, trailing zeros kept (0.00300).
std::string short_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%#.3g", value);
  return buf;
}

std::string with_rate(const std::optional<double>& error, const std::optional<double>& rate) {
  if (!error) return "n/a";
  std::string s = short_number(*error);
  if (rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.2f)", *rate);
    s += buf;
  } else {
    s += " (-)";
  }
  return s;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3gs", s);
  return buf;
}

}  // namespace

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out, bool timing) {
  out << "h,n_dofs,vel_l2_rel,vel_rate,pres_l2_rel,pres_rate,jump_seminorm,proj_pres_error,div_l2";
  if (timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& row : table.rows) {
    const ErrorReport& e = row.errors;
    out << format_number(e.h) << ',' << e.n_dofs << ',' << format_optional(e.vel_l2_rel) << ','
        << format_optional(row.vel_rate) << ',' << format_optional(e.pres_l2_rel) << ','
        << format_optional(row.pres_rate) << ',' << format_optional(e.jump_seminorm) << ','
        << format_optional(e.proj_pres_error) << ',' << format_number(e.div_l2);
    if (timing) out << ',' << format_number(row.wall_seconds);
    out << '\n';
  }
}

void write_convergence_markdown(const ConvergenceTable& table, const std::string& title,
                                std::ostream& out, bool timing) {
  const bool relative_p = table.rows.empty() || table.rows.front().errors.pres_relative;
  out << "### " << title << "\n\n";
  out << "| h | rel. L2 velocity error | " << (relative_p ? "rel." : "abs.")
      << " L2 pressure error |";
  if (timing) out << " wall time (local, not comparable) |";
  out << "\n|---|---|---|";
  if (timing) out << "---|";
  out << '\n';
  for (const auto& row : table.rows) {
    out << "| 1/" << row.cells_per_side << " | " << with_rate(row.errors.vel_l2_rel, row.vel_rate)
        << " | " << with_rate(row.errors.pres_l2_rel, row.pres_rate) << " |";
    if (timing) out << ' ' << seconds(row.wall_seconds) << " |";
    out << '\n';
  }
}

void write_sweep_csv(const std::string& parameter_name, const std::vector<SweepRow>& rows,
                     std::ostream& out, bool timing) {
  out << parameter_name << ",bdm_vel_l2_rel,bdm_pres_l2_rel,rt_vel_l2_rel,rt_pres_l2_rel";
  if (timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& r : rows) {
    out << r.parameter << ',' << format_number(r.bdm_vel) << ',' << format_number(r.bdm_pres)
        << ',' << format_number(r.rt_vel) << ',' << format_number(r.rt_pres);
    if (timing) out << ',' << format_number(r.wall_seconds);
    out << '\n';
  }
}

void write_sweep_markdown(const std::string& parameter_name, const std::vector<SweepRow>& rows,
                          const std::string& title, std::ostream& out, bool timing) {
  out << "### " << title << "\n\n";
  out << "| " << parameter_name
      << " | BDM velocity | BDM pressure | RT velocity | RT pressure |";
  if (timing) out << " wall time (local, not comparable) |";
  out << "\n|---|---|---|---|---|";
  if (timing) out << "---|";
  out << '\n';
  for (const auto& r : rows) {
    out << "| " << r.parameter << " | " << short_number(r.bdm_vel) << " | "
        << short_number(r.bdm_pres) << " | " << short_number(r.rt_vel) << " | "
        << short_number(r.rt_pres) << " |";
    if (timing) out << ' ' << seconds(r.wall_seconds) << " |";
    out << '\n';
  }
}

void write_error_report(const ErrorReport& r, std::ostream& out) {
  out << "h: " << format_number(r.h) << '\n';
  out << "n_dofs: " << r.n_dofs << '\n';
  if (r.vel_l2_rel) out << "vel_l2_rel: " << format_number(*r.vel_l2_rel) << '\n';
  if (r.pres_l2_rel)
    out << (r.pres_relative ? "pres_l2_rel: " : "pres_l2_abs: ") << format_number(*r.pres_l2_rel)
        << '\n';
  if (r.jump_seminorm) out << "jump_seminorm: " << format_number(*r.jump_seminorm) << '\n';
  if (r.proj_pres_error) out << "proj_pres_error: " << format_number(*r.proj_pres_error) << '\n';
  if (r.weighted_vel) out << "weighted_vel_l2: " << format_number(*r.weighted_vel) << '\n';
  out << "div_l2: " << format_number(r.div_l2) << '\n';
  out << "velocity_l2: " << format_number(r.velocity_l2) << '\n';
}

}  // namespace hdivflow
