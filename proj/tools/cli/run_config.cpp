#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <hdivflow/errors.hpp>
#include <hdivflow/report_io.hpp>

namespace hdivflow::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InvalidArgument("invalid boolean '" + std::string(s) + "'");
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

Command parse_command(std::string_view s) {
  if (s == "solve") return Command::solve;
  if (s == "convergence") return Command::convergence;
  if (s == "tables") return Command::tables;
  if (s == "check") return Command::check;
  throw InvalidArgument("unknown command '" + std::string(s) + "'");
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::convergence: return "convergence";
    case Command::tables: return "tables";
    case Command::check: return "check";
  }
  return "?";
}

OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::text;
  if (s == "csv") return OutputFormat::csv;
  if (s == "markdown" || s == "md") return OutputFormat::markdown;
  throw InvalidArgument("unknown format '" + std::string(s) + "'");
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::text: return "text";
    case OutputFormat::csv: return "csv";
    case OutputFormat::markdown: return "markdown";
  }
  return "?";
}

ProblemKind parse_problem(std::string_view s) {
  if (s == "vortex") return ProblemKind::vortex;
  if (s == "shear") return ProblemKind::shear;
  if (s == "reaction") return ProblemKind::reaction;
  throw InvalidArgument("unknown problem '" + std::string(s) + "'");
}

std::string_view to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::vortex: return "vortex";
    case ProblemKind::shear: return "shear";
    case ProblemKind::reaction: return "reaction";
  }
  return "?";
}

OutputFormat RunConfig::effective_format() const {
  if (format) return *format;
  return command == Command::solve || command == Command::check ? OutputFormat::text
                                                                : OutputFormat::csv;
}

void RunConfig::validate() const {
  if (n < 1) throw InvalidArgument("n must be a positive integer");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (cells.empty()) throw InvalidArgument("the N list is empty");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 1) throw InvalidArgument("N values must be positive");
    if (i > 0 && cells[i] <= cells[i - 1])
      throw InvalidArgument("N values must be strictly increasing (h decreasing)");
  }
  if (problem == ProblemKind::shear && cells.front() < 3)
    throw InvalidArgument("the shear problem runs on a periodic mesh and needs N >= 3");
  if (quad) quad->validate();
  if (!(tolerance > 0.0)) throw InvalidArgument("tol must be positive");
  if (which != "all" && which != "1" && which != "2" && which != "3" && which != "4")
    throw InvalidArgument("which must be 1, 2, 3, 4 or all");
  check_compatible(velocity_spec(element), pressure_spec(element));
}

std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  for (auto part : split(s, ',')) out.push_back(parse_number<int>(part, "integer"));
  return out;
}

std::vector<int> parse_h_list(std::string_view s) {
  std::vector<int> out;
  for (auto part : split(s, ',')) {
    double h = 0.0;
    if (const auto slash = part.find('/'); slash != std::string_view::npos) {
      const double num = parse_number<double>(part.substr(0, slash), "h");
      const double den = parse_number<double>(part.substr(slash + 1), "h");
      h = num / den;
    } else {
      h = parse_number<double>(part, "h");
    }
    if (!(h > 0.0) || h > 1.0) throw InvalidArgument("h must lie in (0, 1]");
    const double n = 1.0 / h;
    const long r = std::lround(n);
    if (std::abs(n - static_cast<double>(r)) > 1e-9 * n)
      throw InvalidArgument("h = " + std::string(part) + " is not 1/N for an integer N");
    out.push_back(static_cast<int>(r));
  }
  return out;
}

QuadratureConfig parse_quad_degree(std::string_view s) {
  const auto parts = split(s, ',');
  QuadratureConfig q;
  if (parts.size() == 1) {
    q.volume_degree = parse_number<int>(parts[0], "quadrature degree");
    q.edge_degree = std::max(1, q.volume_degree - 1);
  } else if (parts.size() == 2) {
    q.volume_degree = parse_number<int>(parts[0], "quadrature degree");
    q.edge_degree = parse_number<int>(parts[1], "quadrature degree");
  } else {
    throw InvalidArgument("quad-degree takes VOLUME or VOLUME,EDGE");
  }
  q.validate();
  return q;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "command") c.command = parse_command(value);
  else if (key == "problem") c.problem = parse_problem(value);
  else if (key == "n") c.n = parse_number<int>(value, "n");
  else if (key == "sigma") c.sigma = parse_number<double>(value, "sigma");
  else if (key == "profile") c.profile = parse_shear_profile(value);
  else if (key == "element") c.element = parse_element_pair(value);
  else if (key == "N") c.cells = parse_int_list(value);
  else if (key == "h-list") c.cells = parse_h_list(value);
  else if (key == "pattern") c.pattern = parse_mesh_pattern(value);
  else if (key == "quad-degree") {
    if (value == "default") c.quad.reset();
    else c.quad = parse_quad_degree(value);
  } else if (key == "tol") c.tolerance = parse_number<double>(value, "tol");
  else if (key == "out") c.out = std::string(value);
  else if (key == "format") {
    if (value == "default") c.format.reset();
    else c.format = parse_format(value);
  } else if (key == "seed") c.seed = parse_number<std::uint64_t>(value, "seed");
  else if (key == "which") c.which = std::string(value);
  else if (key == "timing") c.timing = parse_bool(value);
  else throw InvalidArgument("unknown configuration key '" + std::string(key) + "'");
}

void read_config(RunConfig& config, std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument("config line " + std::to_string(number) + ": expected key = value");
    try {
      apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

void read_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  read_config(config, in);
}

void write_config(const RunConfig& c, std::ostream& out) {
  out << "command = " << to_string(c.command) << '\n';
  out << "problem = " << to_string(c.problem) << '\n';
  out << "n = " << c.n << '\n';
  out << "sigma = " << format_number(c.sigma) << '\n';
  out << "profile = " << to_string(c.profile) << '\n';
  out << "element = " << to_string(c.element) << '\n';
  out << "N = " << join(c.cells) << '\n';
  out << "pattern = " << to_string(c.pattern) << '\n';
  out << "quad-degree = ";
  if (c.quad) out << c.quad->volume_degree << ',' << c.quad->edge_degree << '\n';
  else out << "default\n";
  out << "tol = " << format_number(c.tolerance) << '\n';
  out << "out = " << c.out << '\n';
  out << "format = " << (c.format ? to_string(*c.format) : std::string_view("default")) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "which = " << c.which << '\n';
  out << "timing = " << (c.timing ? "true" : "false") << '\n';
}

ProblemSpec make_problem(const RunConfig& c) {
  switch (c.problem) {
    case ProblemKind::vortex: return vortex_problem(c.n, c.sigma);
    case ProblemKind::shear: return shear_problem(c.profile, c.sigma);
    case ProblemKind::reaction: return reaction_problem(c.n, c.sigma);
  }
  throw InvalidArgument("unknown problem");
}

}  // namespace hdivflow::cli
