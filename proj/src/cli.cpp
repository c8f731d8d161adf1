#include "ym/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ym/convergence.hpp"
#include "ym/errors.hpp"
#include "ym/io.hpp"
#include "ym/relaxation.hpp"

namespace ym::cli {

using json = nlohmann::json;

namespace {

constexpr double kVerifyStandardErrors = 3.0;

struct Output {
  int exit_code = success;
  std::string csv;
  json result;
  std::string diagnostic;
};

std::string read_file(const std::string& path) {
  if (path.empty()) throw ParseError("no --input given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MeasureOptions measure_options(const RunConfig& c) {
  MeasureOptions m;
  m.quadrature.tolerance = c.quad_tol;
  m.grid_size = c.grid;
  return m;
}

QuadratureOptions quad_options(const RunConfig& c) {
  QuadratureOptions q;
  q.tolerance = c.quad_tol;
  return q;
}

MOscillatingFunction load_function(const RunConfig& c) {
  return io::parse_function_spec(read_file(c.input));
}

MOscillatingFunction load_valid_function(const RunConfig& c) {
  MOscillatingFunction f = load_function(c);
  const ValidationReport report = validate(f);
  if (!report.valid) {
    std::string codes;
    for (const Violation& v : report.violations) {
      if (!codes.empty()) codes += ", ";
      codes += v.code;
    }
    throw ConstructionError("invalid function: " + codes);
  }
  return f;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_row(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += io::format_number(v);
  }
  return out + "\n";
}

json verdict_result(const ConvergenceVerdict& v) { return json::parse(io::verdict_json(v)); }

std::pair<std::size_t, std::size_t> window_or(const RunConfig& c, std::size_t lo, std::size_t hi) {
  return c.window ? *c.window : std::make_pair(lo, hi);
}

Output do_validate(const RunConfig& c) {
  const MOscillatingFunction f = load_function(c);
  const ValidationReport report = validate(f);
  Output o;
  o.exit_code = report.valid ? success : negative;
  o.csv = "code,piece,message,measured\n";
  json violations = json::array();
  for (const Violation& v : report.violations) {
    o.csv += csv_field(v.code) + "," + std::to_string(v.piece) + "," + csv_field(v.message) +
             "," + io::format_number(v.measured) + "\n";
    violations.push_back({{"code", v.code},
                          {"piece", v.piece},
                          {"message", v.message},
                          {"measured", v.measured}});
  }
  o.result = {{"valid", report.valid}, {"violations", violations}};
  o.diagnostic = report.valid ? "valid" : std::to_string(report.violations.size()) + " violation(s)";
  return o;
}

Output tabulate(const std::string& header, const std::string& csv) {
  Output o;
  o.csv = csv;
  const std::string value_key = header.substr(header.find(',') + 1);
  json ys = json::array();
  json vs = json::array();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const std::size_t comma = line.find(',');
    ys.push_back(std::strtod(line.c_str(), nullptr));
    const double v = std::strtod(line.c_str() + comma + 1, nullptr);
    vs.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  }
  o.result = {{"y", ys}, {value_key, vs}};
  return o;
}

Output do_density(const RunConfig& c) {
  const MeasureOptions m = measure_options(c);
  const DensityFunction g = young_density_function(load_valid_function(c), m);
  return tabulate("y,g", io::density_csv(g, c.grid));
}

Output do_slope(const RunConfig& c) {
  return tabulate("y,Jt", io::slope_csv(load_valid_function(c), c.grid, measure_options(c)));
}

Output do_measure(const RunConfig& c) {
  const ScalarMeasureRCA m = young_measure(load_valid_function(c), measure_options(c));
  Output o;
  o.result = json::parse(io::measure_json(m, c.grid, quad_options(c)));
  o.csv = "kind,y,value\n";
  if (m.density)
    for (double y : io::midpoint_grid(m.range, c.grid))
      o.csv += "density," + csv_row({y, (*m.density)(y)});
  for (const Atom& a : m.atoms.atoms()) o.csv += "atom," + csv_row({a.location, a.weight});
  return o;
}

Output do_verify(const RunConfig& c) {
  const MeasureOptions opts = measure_options(c);
  const MOscillatingFunction f = load_valid_function(c);
  const ScalarMeasureRCA model = young_measure(f, opts);
  const Histogram h = pushforward_empirical(f, c.samples, c.seed, c.bins, opts, c.workers);
  const HistogramComparison cmp = compare_histogram_detailed(model, h, opts);
  const bool passed = cmp.within(kVerifyStandardErrors);

  Output o;
  o.exit_code = passed ? success : negative;
  o.csv = "lo,hi,model,empirical,standard_error,discrepancy,threshold\n";
  json records = json::array();
  for (const BinDiscrepancy& r : cmp.records) {
    const double threshold = kVerifyStandardErrors * r.standard_error;
    o.csv += csv_row({r.lo, r.hi, r.model, r.empirical, r.standard_error, r.discrepancy(), threshold});
    records.push_back({{"lo", r.lo},
                       {"hi", r.hi},
                       {"atom", r.atom},
                       {"model", r.model},
                       {"empirical", r.empirical},
                       {"standard_error", r.standard_error},
                       {"discrepancy", r.discrepancy()},
                       {"threshold", threshold}});
  }
  o.result = {{"passed", passed},
              {"max_discrepancy", cmp.max_discrepancy},
              {"max_standard_errors", cmp.max_standard_errors},
              {"threshold_standard_errors", kVerifyStandardErrors},
              {"samples", h.sample_count},
              {"records", records}};
  std::ostringstream d;
  d << (passed ? "agrees" : "disagrees") << ": max discrepancy "
    << io::format_number(cmp.max_discrepancy) << " (" << io::format_number(cmp.max_standard_errors)
    << " standard errors, threshold " << kVerifyStandardErrors << ")";
  o.diagnostic = d.str();
  return o;
}

Output do_converge(const RunConfig& c) {
  const io::SequenceSpec spec = io::parse_sequence_spec(read_file(c.input));
  const auto [lo, hi] = window_or(c, spec.n_min, spec.n_max);
  if (spec.family == io::SequenceFamily::custom && (lo < spec.n_min || hi > spec.n_max))
    throw PreconditionError("window lies outside the custom sequence indices");
  const std::vector<MOscillatingFunction> fs = spec.members(lo, hi);
  Interval k = fs.front().range();
  for (const MOscillatingFunction& f : fs) k = k.hull(f.range());

  ConvergeOptions opts;
  opts.first_index = lo;
  opts.grid_size = c.grid;
  opts.measure = measure_options(c);
  opts.dieudonne.quadrature = quad_options(c);
  const ConvergeResult r = converge_young(fs, BorelTestFamily(k, c.depth), c.tol, opts);

  Output o;
  o.exit_code = r.verdict.converged ? success : negative;
  o.csv = io::verdict_csv(r.verdict);
  o.result = {{"verdict", verdict_result(r.verdict)},
              {"limit", r.limit ? json::parse(io::measure_json(*r.limit, c.grid, quad_options(c)))
                                : json(nullptr)}};
  o.diagnostic = o.result["verdict"]["summary"].get<std::string>();
  return o;
}

io::FamilySpec load_family(const RunConfig& c) {
  io::FamilySpec spec = io::parse_family_spec(read_file(c.input));
  std::tie(spec.n_min, spec.n_max) = window_or(c, spec.n_min, spec.n_max);
  return spec;
}

Output do_weak_cont(const RunConfig& c) {
  const io::FamilySpec spec = load_family(c);
  const NonhomogeneousDensityFamily fam = spec.family();
  const std::vector<double> xs = spec.points();
  ConvergenceVerdict v = weak_continuity_check(fam, xs, spec.x0, BorelTestFamily(fam.range, c.depth),
                                               c.tol, quad_options(c));
  // Report sequence indices rather than positions in xs.
  v.tail_window = {spec.n_min + v.tail_window.first, spec.n_min + v.tail_window.second};
  Output o;
  o.exit_code = v.converged ? success : negative;
  o.csv = io::verdict_csv(v);
  o.result = verdict_result(v);
  o.diagnostic = o.result["summary"].get<std::string>();
  return o;
}

Output do_homog(const RunConfig& c) {
  const io::FamilySpec spec = load_family(c);
  const bool homogeneous = homogeneity_check(spec.family(), c.points, c.tol, quad_options(c));
  Output o;
  o.exit_code = homogeneous ? success : negative;
  o.csv = "homogeneous,points,tol\n" + std::string(homogeneous ? "1" : "0") + "," +
          std::to_string(c.points) + "," + io::format_number(c.tol) + "\n";
  o.result = {{"homogeneous", homogeneous}, {"points", c.points}, {"tol", c.tol}};
  o.diagnostic = homogeneous ? "homogeneous" : "not homogeneous";
  return o;
}

Output do_bolza(const RunConfig& c) {
  Output o;
  if (c.gradient_ym) {
    const ScalarMeasureRCA nu = relaxation::gradient_young_measure(relaxation::sawtooth(c.n));
    o.csv = io::atoms_csv(nu.atoms);
    json atoms = json::array();
    for (const Atom& a : nu.atoms.atoms()) atoms.push_back({a.location, a.weight});
    o.result = {{"n", c.n}, {"atoms", atoms}};
    return o;
  }
  o.csv = "n,J_value,predicted,abs_error\n";
  json rows = json::array();
  for (std::size_t n : c.n_list) {
    const double value = relaxation::bolza_functional(relaxation::sawtooth(n), c.quad_tol);
    const double nn = static_cast<double>(n);
    const double predicted = 1.0 / (48.0 * nn * nn);
    const double err = std::abs(value - predicted);
    o.csv += std::to_string(n) + "," + csv_row({value, predicted, err});
    rows.push_back({{"n", n}, {"J_value", value}, {"predicted", predicted}, {"abs_error", err}});
  }
  o.result = rows;
  return o;
}

Output dispatch(const RunConfig& c) {
  check_config(c);
  switch (c.command) {
    case Command::validate: return do_validate(c);
    case Command::density: return do_density(c);
    case Command::slope: return do_slope(c);
    case Command::measure: return do_measure(c);
    case Command::verify: return do_verify(c);
    case Command::converge: return do_converge(c);
    case Command::weak_cont: return do_weak_cont(c);
    case Command::homog: return do_homog(c);
    case Command::bolza: return do_bolza(c);
  }
  throw PreconditionError("unknown command");
}

json config_json(const RunConfig& c) {
  json j = {{"input", c.input},
            {"seed", c.seed},
            {"samples", c.samples},
            {"bins", c.bins},
            {"grid", c.grid},
            {"depth", c.depth},
            {"tol", c.tol},
            {"quad_tol", c.quad_tol},
            {"format", c.format == Format::csv ? "csv" : "json"}};
  j["window"] = c.window ? json{c.window->first, c.window->second} : json(nullptr);
  if (c.command == Command::homog) j["points"] = c.points;
  if (c.command == Command::bolza) {
    j["gradient_ym"] = c.gradient_ym;
    if (c.gradient_ym)
      j["n"] = c.n;
    else
      j["n_list"] = c.n_list;
  }
  return j;
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw ParseError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ParseError("cannot rename output to " + path);
  }
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::density: return "density";
    case Command::slope: return "slope";
    case Command::measure: return "measure";
    case Command::verify: return "verify";
    case Command::converge: return "converge";
    case Command::weak_cont: return "weak-cont";
    case Command::homog: return "homog";
    case Command::bolza: return "bolza";
  }
  return "";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::validate, Command::density, Command::slope, Command::measure,
                    Command::verify, Command::converge, Command::weak_cont, Command::homog,
                    Command::bolza})
    if (command_name(c) == name) return c;
  return std::nullopt;
}

void check_config(const RunConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(what);
  };
  need(c.samples > 0, "samples must be positive");
  need(c.bins > 0, "bins must be positive");
  need(c.grid > 1, "grid must be at least 2");
  need(c.depth > 0, "depth must be positive");
  need(c.tol > 0.0, "tol must be positive");
  need(c.quad_tol > 0.0, "quad-tol must be positive");
  need(c.points > 1, "points must be at least 2");
  need(c.n > 0, "n must be positive");
  need(c.workers > 0, "workers must be positive");
  need(!c.n_list.empty(), "n-list must not be empty");
  for (std::size_t n : c.n_list) need(n > 0, "n-list entries must be positive");
  if (c.window) {
    need(c.window->first > 0, "window must start at 1 or later");
    need(c.window->first < c.window->second, "window must be increasing");
  }
}

void apply_environment(RunConfig& config, const char* ym_seed) {
  if (!ym_seed || !*ym_seed) return;
  const std::string text(ym_seed);
  if (text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("YM_SEED is not an unsigned integer: " + text);
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ParseError("YM_SEED is out of range: " + text);
  config.seed = v;
}

RunResult run(const RunConfig& config) {
  RunResult r;
  json error;
  try {
    Output o = dispatch(config);
    r.exit_code = o.exit_code;
    r.diagnostic = std::move(o.diagnostic);
    if (config.format == Format::csv) {
      r.payload = std::move(o.csv);
    } else {
      json j = {{"command", command_name(config.command)},
                {"config", config_json(config)},
                {"result", std::move(o.result)}};
      r.payload = j.dump(2) + "\n";
    }
  } catch (const ParseError& e) {
    r.exit_code = input_error;
    r.diagnostic = e.what();
    if (e.line() > 0) r.diagnostic += " (line " + std::to_string(e.line()) + ", column " +
                                      std::to_string(e.column()) + ")";
    error = {{"kind", "parse"}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}};
  } catch (const QuadratureError& e) {
    r.exit_code = numeric_error;
    r.diagnostic = std::string(e.what()) + " on [" + io::format_number(e.lo()) + ", " +
                   io::format_number(e.hi()) + "]";
    error = {{"kind", "quadrature"}, {"message", e.what()}, {"set", {e.lo(), e.hi()}}};
  } catch (const SingularSlopeError& e) {
    r.exit_code = numeric_error;
    r.diagnostic = std::string(e.what()) + " at y = " + io::format_number(e.y());
    error = {{"kind", "singular_slope"}, {"message", e.what()}, {"y", e.y()}};
  } catch (const ConstructionError& e) {
    r.exit_code = input_error;
    r.diagnostic = e.what();
    error = {{"kind", "construction"}, {"message", e.what()}};
  } catch (const PreconditionError& e) {
    r.exit_code = input_error;
    r.diagnostic = e.what();
    error = {{"kind", "precondition"}, {"message", e.what()}};
  } catch (const UnsupportedError& e) {
    r.exit_code = input_error;
    r.diagnostic = e.what();
    error = {{"kind", "unsupported"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r.exit_code = numeric_error;
    r.diagnostic = e.what();
    error = {{"kind", "numeric"}, {"message", e.what()}};
  }
  if (!error.is_null()) {
    r.payload.clear();
    if (config.format == Format::json)
      r.payload = json{{"command", command_name(config.command)},
                       {"config", config_json(config)},
                       {"error", error}}
                      .dump(2) +
                  "\n";
    return r;
  }

  if (!config.out.empty()) {
    try {
      write_atomically(config.out, r.payload);
    } catch (const ParseError& e) {
      r.exit_code = input_error;
      r.diagnostic = e.what();
    }
  }
  return r;
}

}  // namespace ym::cli
