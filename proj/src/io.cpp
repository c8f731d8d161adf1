#include "ym/io.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "ym/errors.hpp"
#include "ym/expression.hpp"
#include "ym/families.hpp"

namespace ym::io {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
  throw ParseError((pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(os.str(), line, column);
  }
}

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expected an object");
}

void check_keys(const json& obj, const std::string& ptr,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  require_object(obj, ptr);
  for (const char* key : required)
    if (!obj.contains(key)) schema_error(ptr, std::string("missing key \"") + key + "\"");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : required) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) schema_error(ptr, "unknown key \"" + item.key() + "\"");
  }
}

double number_at(const json& j, const std::string& ptr) {
  if (!j.is_number()) schema_error(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(ptr, "expected a finite number");
  return v;
}

double number_field(const json& obj, const char* key, const std::string& ptr) {
  return number_at(obj.at(key), ptr + "/" + key);
}

std::size_t index_at(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    schema_error(ptr, "expected a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

Interval interval_at(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) schema_error(ptr, "expected [lo, hi]");
  const double lo = number_at(j[0], ptr + "/0");
  const double hi = number_at(j[1], ptr + "/1");
  if (!(lo < hi)) schema_error(ptr, "empty interval");
  return {lo, hi};
}

std::pair<std::size_t, std::size_t> indices_at(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) schema_error(ptr, "expected [n_min, n_max]");
  const std::size_t lo = index_at(j[0], ptr + "/0");
  const std::size_t hi = index_at(j[1], ptr + "/1");
  if (!(lo < hi)) schema_error(ptr, "index window must be increasing");
  return {lo, hi};
}

Piece piece_at(const json& j, const std::string& ptr) {
  check_keys(j, ptr, {"interval", "kind", "params"});
  const Interval sub = interval_at(j.at("interval"), ptr + "/interval");
  if (!j.at("kind").is_string()) schema_error(ptr + "/kind", "expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  const json& params = j.at("params");
  const std::string pp = ptr + "/params";
  if (kind == "affine") {
    check_keys(params, pp, {"slope", "intercept"});
    return Piece::affine(sub, number_field(params, "slope", pp),
                         number_field(params, "intercept", pp));
  }
  if (kind == "sin") {
    check_keys(params, pp, {"amplitude", "frequency", "phase"});
    try {
      return Piece::sine(sub, number_field(params, "amplitude", pp),
                         number_field(params, "frequency", pp), number_field(params, "phase", pp));
    } catch (const ConstructionError& e) {
      schema_error(pp, e.what());
    }
  }
  if (kind == "power") {
    check_keys(params, pp, {"exponent"});
    try {
      return Piece::power(sub, number_field(params, "exponent", pp));
    } catch (const ConstructionError& e) {
      schema_error(pp, e.what());
    }
  }
  if (kind == "constant") {
    check_keys(params, pp, {"value"});
    return Piece::constant(sub, number_field(params, "value", pp));
  }
  if (kind == "expr") {
    check_keys(params, pp, {"expression"});
    if (!params.at("expression").is_string())
      schema_error(pp + "/expression", "expected a string");
    const std::string source = params.at("expression").get<std::string>();
    try {
      Expression e = Expression::parse(source);
      return Piece::expression(sub, [e](double x) { return e(x); }, source);
    } catch (const ParseError& e) {
      throw ParseError(pp + "/expression: " + e.what(), e.line(), e.column());
    }
  }
  schema_error(ptr + "/kind", "unknown piece kind \"" + kind + "\"");
}

MOscillatingFunction function_at(const json& j, const std::string& ptr) {
  check_keys(j, ptr, {"domain", "pieces"});
  const Interval dom = interval_at(j.at("domain"), ptr + "/domain");
  const json& pieces = j.at("pieces");
  if (!pieces.is_array() || pieces.empty())
    schema_error(ptr + "/pieces", "expected a nonempty array");
  std::vector<Piece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    out.push_back(piece_at(pieces[i], ptr + "/pieces/" + std::to_string(i)));
  return MOscillatingFunction(Domain1D(dom.lo, dom.hi), std::move(out));
}

SequenceSpec sequence_at(const json& j) {
  check_keys(j, "", {"family", "params", "indices"});
  if (!j.at("family").is_string()) schema_error("/family", "expected a string");
  const std::string family = j.at("family").get<std::string>();
  SequenceSpec spec;
  std::tie(spec.n_min, spec.n_max) = indices_at(j.at("indices"), "/indices");
  const json& params = j.at("params");
  if (family == "sin") {
    spec.family = SequenceFamily::sine;
    check_keys(params, "/params", {});
  } else if (family == "amplitude_tent") {
    spec.family = SequenceFamily::amplitude_tent;
    check_keys(params, "/params", {});
  } else if (family == "roubicek") {
    spec.family = SequenceFamily::roubicek;
    check_keys(params, "/params", {}, {"explicit_pieces"});
    if (params.contains("explicit_pieces"))
      spec.explicit_pieces = index_at(params.at("explicit_pieces"), "/params/explicit_pieces");
  } else if (family == "custom") {
    spec.family = SequenceFamily::custom;
    check_keys(params, "/params", {"members"});
    const json& members = params.at("members");
    if (!members.is_array()) schema_error("/params/members", "expected an array");
    if (members.size() != spec.n_max - spec.n_min + 1)
      schema_error("/params/members", "expected one member per index");
    for (std::size_t i = 0; i < members.size(); ++i)
      spec.custom_members.push_back(function_at(members[i], "/params/members/" + std::to_string(i)));
  } else {
    schema_error("/family", "unknown family \"" + family + "\"");
  }
  return spec;
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::vector<MOscillatingFunction> SequenceSpec::members(std::size_t first,
                                                        std::size_t last) const {
  std::vector<MOscillatingFunction> out;
  for (std::size_t n = first; n <= last; ++n) {
    switch (family) {
      case SequenceFamily::sine: out.push_back(families::sine_wave(n)); break;
      case SequenceFamily::roubicek: out.push_back(families::roubicek(n, explicit_pieces)); break;
      case SequenceFamily::amplitude_tent:
        out.push_back(families::amplitude_tent_member(n));
        break;
      case SequenceFamily::custom:
        if (n < n_min || n > n_max)
          throw PreconditionError("custom sequence has no member " + std::to_string(n));
        out.push_back(custom_members[n - n_min]);
        break;
    }
  }
  return out;
}

NonhomogeneousDensityFamily FamilySpec::family() const {
  switch (kind) {
    case NonhomogeneousKind::triangular: return families::triangular();
    case NonhomogeneousKind::uniform: return families::uniform_family();
    case NonhomogeneousKind::discontinuous: return families::discontinuous_family();
  }
  return families::triangular();
}

std::vector<double> FamilySpec::points() const {
  std::vector<double> xs;
  for (std::size_t n = n_min; n <= n_max; ++n)
    xs.push_back(x0 + static_cast<double>(approach) / static_cast<double>(n));
  return xs;
}

MOscillatingFunction parse_function_spec(std::string_view text) {
  return function_at(parse_text(text), "");
}

SequenceSpec parse_sequence_spec(std::string_view text) { return sequence_at(parse_text(text)); }

FamilySpec parse_family_spec(std::string_view text) {
  const json j = parse_text(text);
  check_keys(j, "", {"family"}, {"x0", "indices", "approach"});
  FamilySpec spec;
  if (!j.at("family").is_string()) schema_error("/family", "expected a string");
  const std::string kind = j.at("family").get<std::string>();
  if (kind == "triangular")
    spec.kind = NonhomogeneousKind::triangular;
  else if (kind == "uniform")
    spec.kind = NonhomogeneousKind::uniform;
  else if (kind == "discontinuous")
    spec.kind = NonhomogeneousKind::discontinuous;
  else
    schema_error("/family", "unknown family \"" + kind + "\"");
  if (j.contains("x0")) spec.x0 = number_at(j.at("x0"), "/x0");
  if (j.contains("indices")) std::tie(spec.n_min, spec.n_max) = indices_at(j.at("indices"), "/indices");
  if (j.contains("approach")) {
    const json& a = j.at("approach");
    if (a == "above")
      spec.approach = 1;
    else if (a == "below")
      spec.approach = -1;
    else
      schema_error("/approach", "expected \"above\" or \"below\"");
  }
  return spec;
}

std::variant<MOscillatingFunction, SequenceSpec> parse_spec(std::string_view text) {
  const json j = parse_text(text);
  require_object(j, "");
  if (j.contains("domain")) return function_at(j, "");
  if (j.contains("family")) return sequence_at(j);
  schema_error("", "expected a function (\"domain\") or sequence (\"family\") object");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> midpoint_grid(const Interval& s, std::size_t grid_size) {
  std::vector<double> ys;
  ys.reserve(grid_size);
  const double h = s.length() / static_cast<double>(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) ys.push_back(s.lo + (static_cast<double>(k) + 0.5) * h);
  return ys;
}

std::string density_csv(const DensityFunction& g, std::size_t grid_size) {
  std::string out = "y,g\n";
  for (double y : midpoint_grid(g.support(), grid_size)) append_row(out, {y, g(y)});
  return out;
}

std::string slope_csv(const MOscillatingFunction& f, std::size_t grid_size,
                      const MeasureOptions& options) {
  std::string out = "y,Jt\n";
  for (double y : midpoint_grid(f.range(), grid_size))
    append_row(out, {y, total_slope(f, y, options)});
  return out;
}

std::string measure_json(const ScalarMeasureRCA& m, std::size_t grid_size,
                         const QuadratureOptions& quad) {
  json j;
  j["range"] = {m.range.lo, m.range.hi};
  json grid = json::array();
  if (m.density && m.range.lo < m.range.hi) {
    const DensityFunction& g = *m.density;
    std::vector<double> breaks = g.split_points();
    breaks.push_back(g.support().lo);
    breaks.push_back(g.support().hi);
    const DensityFunction over_range = DensityFunction::closed_form(
        m.range, [&g](double y) { return g(y); }, {g.singular_points().begin(), g.singular_points().end()},
        std::move(breaks));
    const DensityFunction table = over_range.tabulated(grid_size, quad);
    for (double v : table.grid()) grid.push_back(number_json(v));
  }
  j["density_grid"] = std::move(grid);
  json atoms = json::array();
  for (const Atom& a : m.atoms.atoms()) atoms.push_back({a.location, a.weight});
  j["atoms"] = std::move(atoms);
  return j.dump();
}

ScalarMeasureRCA measure_from_json(std::string_view text) {
  const json j = parse_text(text);
  check_keys(j, "", {"density_grid", "atoms", "range"});
  ScalarMeasureRCA m;
  m.range = interval_at(j.at("range"), "/range");
  const json& grid = j.at("density_grid");
  if (!grid.is_array()) schema_error("/density_grid", "expected an array");
  if (!grid.empty()) {
    std::vector<double> values;
    for (std::size_t i = 0; i < grid.size(); ++i)
      values.push_back(number_at(grid[i], "/density_grid/" + std::to_string(i)));
    if (values.size() < 2) schema_error("/density_grid", "need at least two nodes");
    m.density = DensityFunction::from_grid(m.range, std::move(values));
  }
  const json& atoms = j.at("atoms");
  if (!atoms.is_array()) schema_error("/atoms", "expected an array");
  std::vector<Atom> list;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string ptr = "/atoms/" + std::to_string(i);
    if (!atoms[i].is_array() || atoms[i].size() != 2) schema_error(ptr, "expected [c, w]");
    list.push_back({number_at(atoms[i][0], ptr + "/0"), number_at(atoms[i][1], ptr + "/1")});
  }
  try {
    m.atoms = AtomList(std::move(list));
  } catch (const ConstructionError& e) {
    schema_error("/atoms", e.what());
  }
  return m;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,mass\n";
  for (std::size_t k = 0; k < h.n_bins; ++k) append_row(out, {h.bin_lo(k), h.bin_hi(k), h.masses[k]});
  for (const Atom& a : h.point_masses) append_row(out, {a.location, a.location, a.weight});
  return out;
}

std::string verdict_json(const ConvergenceVerdict& v) {
  json j;
  j["converged"] = v.converged;
  j["worst_residual"] = v.worst_residual;
  j["tail_window"] = {v.tail_window.first, v.tail_window.second};
  json sets = json::array();
  for (const SetRecord& r : v.per_set)
    sets.push_back({{"level", r.set.level},
                    {"index", r.set.index},
                    {"lo", r.set.set.lo},
                    {"hi", r.set.set.hi},
                    {"limit", r.limit},
                    {"residual", r.residual}});
  j["sets"] = std::move(sets);
  std::ostringstream summary;
  summary << (v.converged ? "converged" : "not converged") << ": " << v.per_set.size()
          << " sets, worst residual " << format_number(v.worst_residual) << " over indices ["
          << v.tail_window.first << ", " << v.tail_window.second << "]";
  j["summary"] = summary.str();
  return j.dump();
}

std::string verdict_csv(const ConvergenceVerdict& v) {
  std::string out = "level,k,lo,hi,limit,residual\n";
  for (const SetRecord& r : v.per_set)
    append_row(out, {static_cast<double>(r.set.level), static_cast<double>(r.set.index),
                     r.set.set.lo, r.set.set.hi, r.limit, r.residual});
  return out;
}

std::string atoms_csv(const AtomList& atoms) {
  std::string out = "location,weight\n";
  for (const Atom& a : atoms.atoms()) append_row(out, {a.location, a.weight});
  return out;
}

}  // namespace ym::io
