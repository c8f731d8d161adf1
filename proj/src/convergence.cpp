#include "ym/convergence.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ym/errors.hpp"

namespace ym {

BorelTestFamily::BorelTestFamily(Interval k, std::size_t depth) : range_(k), depth_(depth) {
  if (!(k.lo < k.hi)) throw ConstructionError("test family needs a nonempty range");
  if (depth > 24) throw ConstructionError("test family depth is limited to 24");
  for (std::size_t level = 0; level <= depth; ++level) {
    const std::size_t count = std::size_t{1} << level;
    for (std::size_t i = 0; i < count; ++i) {
      const double lo = k.lo + k.length() * static_cast<double>(i) / static_cast<double>(count);
      const double hi = i + 1 == count
                            ? k.hi
                            : k.lo + k.length() * static_cast<double>(i + 1) /
                                         static_cast<double>(count);
      sets_.push_back({level, i, {lo, hi}});
    }
  }
}

std::size_t tail_start(std::size_t n_min, std::size_t n_max, double tail_fraction) {
  const auto span = static_cast<double>(n_max - n_min);
  const auto back = std::max<std::size_t>(1, static_cast<std::size_t>(span * tail_fraction));
  return n_max - std::min(back, n_max - n_min);
}

namespace {

void check_window(std::size_t n_min, std::size_t n_max, std::size_t lo, std::size_t hi) {
  if (!(n_min < n_max))
    throw PreconditionError("window requires n_min < n_max");
  if (n_min < lo || n_max > hi) {
    std::ostringstream os;
    os << "window [" << n_min << ", " << n_max << "] exceeds available indices [" << lo
       << ", " << hi << "]";
    throw PreconditionError(os.str());
  }
}

// Shared Cauchy-residual bookkeeping; `integral(k, set)` gives I_{n_k}(A).
template <typename SetIntegral>
ConvergenceVerdict cauchy_verdict(const BorelTestFamily& family, std::size_t first,
                                  std::size_t n_max, double tol, SetIntegral&& integral) {
  ConvergenceVerdict v;
  v.tail_window = {first, n_max};
  const std::size_t count = n_max - first + 1;
  for (const TestSet& t : family.sets()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double last = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      double value;
      try {
        value = integral(k, t.set);
      } catch (const QuadratureError& e) {
        std::ostringstream os;
        os << "quadrature failed on test set (level " << t.level << ", index " << t.index
           << ") [" << t.set.lo << ", " << t.set.hi << "] at n=" << first + k << ": "
           << e.what();
        throw QuadratureError(os.str(), t.set.lo, t.set.hi, e.error_estimate());
      }
      lo = std::min(lo, value);
      hi = std::max(hi, value);
      last = value;
    }
    const double residual = hi - lo;
    v.per_set.push_back({t, last, residual});
    v.worst_residual = std::max(v.worst_residual, residual);
  }
  v.converged = v.worst_residual <= tol;
  return v;
}

}  // namespace

ConvergenceVerdict dieudonne_check(const DensitySequence& seq, const BorelTestFamily& family,
                                   std::size_t n_min, std::size_t n_max, double tol,
                                   const DieudonneOptions& options) {
  check_window(n_min, n_max, seq.min_index, seq.max_index);
  if (family.size() == 0) throw PreconditionError("empty test family");
  const std::size_t first = tail_start(n_min, n_max, options.tail_fraction);
  std::vector<DensityFunction> densities;
  for (std::size_t n = first; n <= n_max; ++n) densities.push_back(seq(n));
  return cauchy_verdict(family, first, n_max, tol, [&](std::size_t k, const Interval& a) {
    return integrate_density(densities[k], a, options.quadrature);
  });
}

ConvergenceVerdict measure_setwise_check(const MeasureSequence& seq,
                                         const BorelTestFamily& family, std::size_t n_min,
                                         std::size_t n_max, double tol,
                                         const DieudonneOptions& options) {
  check_window(n_min, n_max, seq.min_index, seq.max_index);
  if (family.size() == 0) throw PreconditionError("empty test family");
  const std::size_t first = tail_start(n_min, n_max, options.tail_fraction);
  std::vector<ScalarMeasureRCA> measures;
  for (std::size_t n = first; n <= n_max; ++n) measures.push_back(seq.generator(n));
  return cauchy_verdict(family, first, n_max, tol, [&](std::size_t k, const Interval& a) {
    return measure_of(measures[k], a, options.quadrature);
  });
}

DensityFunction weak_limit_estimate(const DensitySequence& seq,
                                    const ConvergenceVerdict& verdict, std::size_t n_ref,
                                    std::size_t grid_size, const QuadratureOptions& quad) {
  if (!verdict.converged)
    throw PreconditionError("weak limit requested without a converged verdict");
  if (verdict.tail_window.second != n_ref)
    throw PreconditionError("verdict window does not end at the reference index");
  return seq(n_ref).tabulated(grid_size, quad);
}

bool monotone_slope_check(std::span<const MOscillatingFunction> fs,
                          std::span<const double> y_grid, double tol,
                          const MeasureOptions& options) {
  if (fs.size() < 2 || y_grid.empty()) return true;
  std::vector<std::vector<double>> slopes(y_grid.size());
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    slopes[j].reserve(fs.size());
    for (const MOscillatingFunction& f : fs) slopes[j].push_back(total_slope(f, y_grid[j], options));
  }
  auto step = [](double a, double b) { return a == b ? 0.0 : b - a; };

  int direction = 0;
  for (std::size_t j = 0; j < y_grid.size() && direction == 0; ++j) {
    for (std::size_t n = 0; n + 1 < fs.size(); ++n) {
      const double d = step(slopes[j][n], slopes[j][n + 1]);
      if (std::abs(d) > tol) {
        direction = d > 0 ? 1 : -1;
        break;
      }
    }
  }
  if (direction == 0) return true;
  for (const auto& row : slopes) {
    for (std::size_t n = 0; n + 1 < row.size(); ++n) {
      const double d = step(row[n], row[n + 1]);
      if (std::isnan(d)) return false;
      if (direction > 0 && d < -tol) return false;
      if (direction < 0 && d > tol) return false;
    }
  }
  return true;
}

std::vector<double> common_interior_grid(std::span<const MOscillatingFunction> fs,
                                         std::size_t points) {
  if (fs.empty() || points == 0) return {};
  Interval common = fs.front().range();
  for (const MOscillatingFunction& f : fs) common = common.intersect(f.range());
  if (!(common.lo < common.hi)) return {};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = common.lo + common.length() * (static_cast<double>(i) + 0.5) /
                              static_cast<double>(points);
  return grid;
}

DensitySequence young_density_sequence(std::span<const MOscillatingFunction> fs,
                                       std::size_t first_index, const MeasureOptions& options) {
  if (fs.empty()) throw PreconditionError("empty function sequence");
  auto members = std::make_shared<std::vector<DensityFunction>>();
  Interval hull = fs.front().range();
  for (const MOscillatingFunction& f : fs) {
    members->push_back(young_density_function(f, options));
    hull = hull.hull(f.range());
  }
  DensitySequence seq;
  seq.range = hull;
  seq.min_index = first_index;
  seq.max_index = first_index + fs.size() - 1;
  seq.generator = [members, first_index](std::size_t n) {
    return (*members)[n - first_index];
  };
  return seq;
}

ConvergeResult converge_young(std::span<const MOscillatingFunction> fs,
                              const BorelTestFamily& family, double tol,
                              const ConvergeOptions& options) {
  if (fs.size() < 2) throw PreconditionError("need at least two functions");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].has_constant_pieces())
      throw PreconditionError("member " + std::to_string(options.first_index + i) +
                              " has constant pieces");
    const ValidationReport report = validate(fs[i], 64, options.measure.tol);
    if (!report.valid)
      throw PreconditionError("member " + std::to_string(options.first_index + i) +
                              " is not a valid oscillating function (" +
                              report.violations.front().code + ")");
  }
  const std::vector<double> y_grid = common_interior_grid(fs);
  if (!monotone_slope_check(fs, y_grid, options.slope_tol, options.measure))
    throw PreconditionError("total slopes do not form a monotone sequence");

  const DensitySequence seq = young_density_sequence(fs, options.first_index, options.measure);
  ConvergeResult result;
  result.verdict = dieudonne_check(seq, family, seq.min_index, seq.max_index, tol,
                                   options.dieudonne);
  if (result.verdict.converged) {
    ScalarMeasureRCA limit;
    limit.range = seq.range;
    limit.young = true;
    limit.density = weak_limit_estimate(seq, result.verdict, seq.max_index, options.grid_size,
                                        options.dieudonne.quadrature);
    result.limit = std::move(limit);
  }
  return result;
}

ConvergenceVerdict weak_continuity_check(const NonhomogeneousDensityFamily& fam,
                                         std::span<const double> xs, double x0,
                                         const BorelTestFamily& family, double tol,
                                         const QuadratureOptions& quad) {
  if (xs.empty()) throw PreconditionError("weak continuity needs a nonempty sequence");
  if (!fam.domain.contains(x0)) throw DomainError("x0 is outside the family domain");
  for (double x : xs)
    if (!fam.domain.contains(x)) throw DomainError("sequence point outside the family domain");

  const DensityFunction target = fam(x0);
  const DensityFunction last = fam(xs.back());
  ConvergenceVerdict v;
  v.tail_window = {xs.size() - 1, xs.size() - 1};
  for (const TestSet& t : family.sets()) {
    const double limit = integrate_density(target, t.set, quad);
    const double residual = std::abs(integrate_density(last, t.set, quad) - limit);
    v.per_set.push_back({t, limit, residual});
    v.worst_residual = std::max(v.worst_residual, residual);
  }
  v.converged = v.worst_residual <= tol;
  return v;
}

double l1_distance(const DensityFunction& a, const DensityFunction& b, const Interval& range,
                   const QuadratureOptions& quad) {
  std::vector<double> splits = a.split_points();
  const std::vector<double> more = b.split_points();
  splits.insert(splits.end(), more.begin(), more.end());
  for (double s : {a.support().lo, a.support().hi, b.support().lo, b.support().hi})
    splits.push_back(s);
  return integrate_adaptive([&](double y) { return std::abs(a(y) - b(y)); }, range, splits,
                            quad)
      .value;
}

bool homogeneity_check(const NonhomogeneousDensityFamily& fam, std::size_t x_samples,
                       double tol, const QuadratureOptions& quad) {
  if (x_samples < 2) throw PreconditionError("homogeneity check needs at least two samples");
  std::vector<DensityFunction> members;
  for (std::size_t i = 0; i < x_samples; ++i) {
    const double x = fam.domain.lower() + fam.domain.measure() * (static_cast<double>(i) + 0.5) /
                                              static_cast<double>(x_samples);
    members.push_back(fam(x));
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (l1_distance(members[i], members[j], fam.range, quad) > tol) return false;
  return true;
}

namespace families {

DensityFunction uniform_density(double lo, double hi) {
  if (!(lo < hi)) throw ConstructionError("uniform density needs lo < hi");
  const double value = 1.0 / (hi - lo);
  return DensityFunction::closed_form({lo, hi}, [value](double) { return value; });
}

DensityFunction arcsine_density() {
  return DensityFunction::closed_form(
      {-1.0, 1.0},
      [](double y) {
        const double c = std::sqrt(std::max(0.0, (1.0 - y) * (1.0 + y)));
        return 1.0 / (std::numbers::pi * c);
      },
      {-1.0, 1.0});
}

NonhomogeneousDensityFamily triangular() {
  return {Domain1D(0.0, 1.0), {0.0, 2.0}, [](double x) {
            return DensityFunction::closed_form(
                {0.0, 2.0},
                [x](double y) {
                  if (y < 0.0) return 0.0;
                  if (y < x) return 2.0 * y / x;
                  if (y < 1.0) return 2.0 * (1.0 - y) / (1.0 - x);
                  return 0.0;
                },
                {}, {x, 1.0});
          }};
}

NonhomogeneousDensityFamily uniform_family() {
  return {Domain1D(0.0, 1.0), {0.0, 2.0}, [](double) { return uniform_density(0.0, 2.0); }};
}

NonhomogeneousDensityFamily discontinuous_family() {
  return {Domain1D(0.0, 1.0), {0.0, 2.0}, [](double x) {
            if (x < 0.5) return uniform_density(0.0, 2.0);
            return DensityFunction::closed_form(
                {0.0, 2.0},
                [](double y) {
                  const double c = std::sqrt(std::max(0.0, y * (2.0 - y)));
                  return 1.0 / (std::numbers::pi * c);
                },
                {0.0, 2.0});
          }};
}

DensitySequence alternating_uniform(std::size_t max_index) {
  DensitySequence seq;
  seq.range = {0.0, 2.0};
  seq.min_index = 1;
  seq.max_index = max_index;
  seq.generator = [](std::size_t n) {
    return n % 2 == 1 ? uniform_density(0.0, 1.0) : uniform_density(0.0, 2.0);
  };
  return seq;
}

}  // namespace families

}  // namespace ym
