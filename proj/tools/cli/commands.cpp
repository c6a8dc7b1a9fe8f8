#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <hdivflow/errors.hpp>
#include <hdivflow/report_io.hpp>

namespace hdivflow::cli {

namespace {

// Writes to config.out, or to `out` when no path is set.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  write(file);
}

std::string pair_title(ElementPair pair) {
  switch (pair) {
    case ElementPair::rt0p0: return "RT0/P0";
    case ElementPair::rt1p1dc: return "RT1/P1dc";
    case ElementPair::bdm1p0: return "BDM1/P0";
  }
  return "?";
}

void write_table(const ConvergenceTable& table, const std::string& title, OutputFormat format,
                 bool timing, std::ostream& out) {
  if (format == OutputFormat::markdown) write_convergence_markdown(table, title, out, timing);
  else write_convergence_csv(table, out, timing);
}

int run_solve(const RunConfig& c, std::ostream& out) {
  const ProblemSpec problem = make_problem(c);
  const int cells = c.cells.front();
  const SolveResult r = solve_problem(problem, c.element, cells, solve_options(c));
  const auto format = c.effective_format();
  emit(c.out, out, [&](std::ostream& os) {
    if (format == OutputFormat::text) {
      os << "problem: " << problem.label << '\n';
      os << "element: " << to_string(c.element) << '\n';
      os << "N: " << cells << '\n';
      write_error_report(r.errors, os);
      os << "relative_residual: " << format_number(r.solve.relative_residual) << '\n';
      os << "multiplier: " << format_number(r.multiplier) << '\n';
      os << "fill_in: " << r.solve.fill_in << '\n';
      if (c.timing) os << "wall_seconds: " << format_number(r.wall_seconds) << '\n';
      return;
    }
    ConvergenceTable table;
    table.problem = problem.label;
    table.pair = c.element;
    table.rows.push_back({cells, r.errors, {}, {}, {}, {}, r.wall_seconds});
    write_table(table, problem.label + ", " + pair_title(c.element), format, c.timing, os);
  });
  return kExitOk;
}

int run_convergence(const RunConfig& c, std::ostream& out) {
  const ProblemSpec problem = make_problem(c);
  const auto table = convergence_study(problem, c.element, c.cells, solve_options(c));
  emit(c.out, out, [&](std::ostream& os) {
    write_table(table, problem.label + ", " + pair_title(c.element), c.effective_format(),
                c.timing, os);
  });
  return kExitOk;
}

std::string sigma_label(double sigma) {
  if (sigma == 1e6) return "1e6";
  return format_number(sigma);
}

int run_tables(const RunConfig& c, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  fs::create_directories(dir);
  const bool md = c.effective_format() == OutputFormat::markdown;
  const std::string ext = md ? ".md" : ".csv";
  const SolveOptions options = solve_options(c);
  const std::vector<int> table_meshes = {10, 20, 40, 80};

  const auto open = [&](int which) {
    const fs::path path = dir / ("table" + std::to_string(which) + ext);
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << path.string() << '\n';
    return file;
  };
  const auto wanted = [&](int which) { return c.which == "all" || c.which == std::to_string(which); };

  for (int which : {1, 2}) {
    if (!wanted(which)) continue;
    const ElementPair pair = which == 1 ? ElementPair::bdm1p0 : ElementPair::rt1p1dc;
    const auto table = convergence_study(vortex_problem(1, 100.0), pair, table_meshes, options);
    auto file = open(which);
    write_table(table, "Errors for the " + pair_title(pair) + " element, sigma = 100, n = 1",
                md ? OutputFormat::markdown : OutputFormat::csv, c.timing, *file);
  }

  const auto sweep_row = [&](const ProblemSpec& problem, std::string label) {
    const auto bdm = solve_problem(problem, ElementPair::bdm1p0, 40, options);
    const auto rt = solve_problem(problem, ElementPair::rt1p1dc, 40, options);
    return SweepRow{std::move(label), *bdm.errors.vel_l2_rel, *bdm.errors.pres_l2_rel,
                    *rt.errors.vel_l2_rel, *rt.errors.pres_l2_rel,
                    bdm.wall_seconds + rt.wall_seconds};
  };
  if (wanted(3)) {
    std::vector<SweepRow> rows;
    for (int n : {1, 2, 4, 8}) rows.push_back(sweep_row(vortex_problem(n, 100.0), std::to_string(n)));
    auto file = open(3);
    if (md)
      write_sweep_markdown("n", rows, "BDM1/P0 and RT1/P1dc, h = 1/40, sigma = 100, varying n",
                           *file, c.timing);
    else
      write_sweep_csv("n", rows, *file, c.timing);
  }
  if (wanted(4)) {
    std::vector<SweepRow> rows;
    for (double sigma : {1e6, 100.0, 50.0, 25.0, 10.0, 1.0})
      rows.push_back(sweep_row(vortex_problem(1, sigma), sigma_label(sigma)));
    auto file = open(4);
    if (md)
      write_sweep_markdown("sigma", rows, "BDM1/P0 and RT1/P1dc, h = 1/40, n = 1, varying sigma",
                           *file, c.timing);
    else
      write_sweep_csv("sigma", rows, *file, c.timing);
  }
  return kExitOk;
}

int run_check(const RunConfig& c, std::ostream& out) {
  const auto outcomes = run_property_checks(c.seed);
  bool ok = true;
  emit(c.out, out, [&](std::ostream& os) {
    os << "seed: " << c.seed << '\n';
    for (const auto& o : outcomes) {
      os << (o.passed ? "PASS " : "FAIL ") << o.name;
      if (!o.detail.empty()) os << ": " << o.detail;
      os << '\n';
      ok = ok && o.passed;
    }
  });
  if (!ok) {
    for (const auto& o : outcomes)
      if (!o.passed) std::cerr << "property failed: " << o.name << '\n';
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

}  // namespace

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.pattern = c.pattern;
  o.quad = c.quad;
  o.solver.tolerance = c.tolerance;
  return o;
}

int run(const RunConfig& config, std::ostream& out) {
  config.validate();
  switch (config.command) {
    case Command::solve: return run_solve(config, out);
    case Command::convergence: return run_convergence(config, out);
    case Command::tables: return run_tables(config, out);
    case Command::check: return run_check(config, out);
  }
  return kExitParseError;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"H(div) upwind finite element solver for div(u (x) beta) + sigma u + grad p = f"};
  app.require_subcommand(0, 1);

  // Flag values are kept as text and applied after the config file.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"problem", "vortex | shear | reaction"},
      {"n", "vortex index"},
      {"sigma", "reaction coefficient"},
      {"profile", "shear profile: constant | linear | sine"},
      {"element", "rt0p0 | rt1p1dc | bdm1p0"},
      {"N", "cells per side, comma separated"},
      {"h-list", "mesh sizes 1/N, comma separated"},
      {"pattern", "union_jack | right | left"},
      {"quad-degree", "VOLUME or VOLUME,EDGE"},
      {"tol", "solver relative residual tolerance"},
      {"out", "output file (directory for tables)"},
      {"format", "text | csv | markdown"},
      {"seed", "seed for the property checks"},
      {"which", "tables: 1, 2, 3, 4 or all"},
  };
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& [key, help] : flags)
    options.emplace_back(key, app.add_option("--" + key, values[key], help));
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file");
  bool timing = false, dump = false;
  auto* timing_flag = app.add_flag("--timing", timing, "add local wall-clock columns");
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  std::string command;
  for (const char* name : {"solve", "convergence", "tables", "check"}) {
    auto* sub = app.add_subcommand(name, std::string("run ") + name);
    sub->fallthrough();
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParseError;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) read_config_file(config, config_path);
    if (!command.empty()) config.command = parse_command(command);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) apply_setting(config, key, values[key]);
    if (timing_flag->count() > 0) config.timing = timing;
    config.validate();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  }
  if (dump) {
    write_config(config, out);
    return kExitOk;
  }

  try {
    return run(config, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const SingularSystemError& e) {
    err << "solver failure: " << e.what() << " (pivot " << e.pivot() << ")\n";
    return kExitSolverFailure;
  } catch (const ConvergenceFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

}  // namespace hdivflow::cli
