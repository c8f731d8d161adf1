#include "ym/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "ym/errors.hpp"
#include "ym/rng.hpp"

namespace ym {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityFunction

DensityFunction DensityFunction::closed_form(Interval support, RealMap evaluator,
                                             std::vector<double> singular_points,
                                             std::vector<double> breakpoints) {
  if (support.hi < support.lo) throw ConstructionError("density support is reversed");
  DensityFunction g;
  g.support_ = support;
  g.evaluator_ = std::move(evaluator);
  g.singular_ = std::move(singular_points);
  g.breakpoints_ = std::move(breakpoints);
  sort_unique(g.singular_);
  sort_unique(g.breakpoints_);
  return g;
}

DensityFunction DensityFunction::from_grid(Interval support, std::vector<double> values) {
  if (values.size() < 2) throw ConstructionError("density grid needs at least two nodes");
  if (!(support.lo < support.hi)) throw ConstructionError("density grid support is empty");
  for (double v : values)
    if (!std::isfinite(v)) throw ConstructionError("density grid values must be finite");
  DensityFunction g;
  g.support_ = support;
  g.grid_ = std::move(values);
  return g;
}

double DensityFunction::interpolate(double y) const {
  const std::size_t cells = grid_.size() - 1;
  const double t = (y - support_.lo) / support_.length() * static_cast<double>(cells);
  const double cell = std::clamp(std::floor(t), 0.0, static_cast<double>(cells - 1));
  const auto k = static_cast<std::size_t>(cell);
  const double frac = t - cell;
  return grid_[k] + (grid_[k + 1] - grid_[k]) * frac;
}

double DensityFunction::operator()(double y) const {
  if (y < support_.lo || y > support_.hi) return 0.0;
  if (evaluator_) return evaluator_(y);
  return interpolate(y);
}

std::vector<double> DensityFunction::split_points() const {
  std::vector<double> s = breakpoints_;
  s.insert(s.end(), singular_.begin(), singular_.end());
  sort_unique(s);
  return s;
}

DensityFunction DensityFunction::tabulated(std::size_t grid_size,
                                           const QuadratureOptions& quad) const {
  if (grid_size < 2) throw ConstructionError("tabulation needs at least two nodes");
  DensityFunction g = *this;
  g.grid_.assign(grid_size, 0.0);
  if (!(support_.lo < support_.hi)) return g;
  const double h = support_.length() / static_cast<double>(grid_size - 1);
  auto node = [&](std::size_t k) {
    return k + 1 == grid_size ? support_.hi : support_.lo + h * static_cast<double>(k);
  };
  for (std::size_t k = 0; k < grid_size; ++k) g.grid_[k] = (*this)(node(k));
  for (std::size_t k = 0; k < grid_size; ++k) {
    if (std::isfinite(g.grid_[k])) continue;
    // Trapezoid on the neighbouring cell must carry the exact cell mass.
    const std::size_t nb = k == 0 ? 1 : k - 1;
    const Interval cell{std::min(node(k), node(nb)), std::max(node(k), node(nb))};
    const double mass = integrate_density(*this, cell, quad);
    const double other = std::isfinite(g.grid_[nb]) ? g.grid_[nb] : 0.0;
    g.grid_[k] = std::max(0.0, 2.0 * mass / h - other);
  }
  return g;
}

// ---------------------------------------------------------------------------
// AtomList

AtomList::AtomList(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].weight > 0.0))
      throw ConstructionError("atom weights must be strictly positive");
    if (i > 0 && atoms_[i].location == atoms_[i - 1].location)
      throw ConstructionError("atom locations must be distinct");
  }
}

AtomList AtomList::merged(std::vector<Atom> atoms, double snap) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && a.location - out.back().location <= snap)
      out.back().weight += a.weight;
    else
      out.push_back(a);
  }
  return AtomList(std::move(out));
}

double AtomList::total_weight() const noexcept {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight;
  return s;
}

double AtomList::mass_in(const Interval& a) const noexcept {
  double s = 0.0;
  for (const Atom& atom : atoms_)
    if (a.contains(atom.location)) s += atom.weight;
  return s;
}

// ---------------------------------------------------------------------------
// Histogram

double Histogram::bin_lo(std::size_t k) const noexcept {
  return range.lo + range.length() * static_cast<double>(k) / static_cast<double>(n_bins);
}

double Histogram::bin_hi(std::size_t k) const noexcept {
  return k + 1 == n_bins ? range.hi : bin_lo(k + 1);
}

double Histogram::total_mass() const noexcept {
  double s = 0.0;
  for (double m : masses) s += m;
  for (const Atom& a : point_masses) s += a.weight;
  return s;
}

// ---------------------------------------------------------------------------
// Young measure of an oscillating function

double total_slope(const MOscillatingFunction& f, double y, const MeasureOptions& options) {
  const double top = f.range().hi;
  double sum = 0.0;
  for (const Piece& p : f.pieces()) {
    if (p.is_constant()) continue;
    // Right-continuous in y: an image counts on [lo, hi), closed at the top
    // of the range. Endpoints are matched within tol.
    const Interval im = p.image();
    if (y < im.lo - options.tol || y > im.hi + options.tol) continue;
    if (y >= im.hi - options.tol && im.hi < top - options.tol) continue;
    try {
      sum += inverse_slope(p, y, options.tol, options.numeric);
    } catch (const SingularSlopeError&) {
      return kInf;
    }
  }
  return sum;
}

double young_density(const MOscillatingFunction& f, double y, const MeasureOptions& options) {
  return total_slope(f, y, options) / f.domain().measure();
}

DensityFunction young_density_function(const MOscillatingFunction& f,
                                       const MeasureOptions& options) {
  auto shared = std::make_shared<const MOscillatingFunction>(f);
  std::vector<double> singular;
  std::vector<double> breaks;
  for (const Piece& p : f.pieces()) {
    if (p.is_constant()) continue;
    std::vector<double> candidates{p.image().lo, p.image().hi};
    candidates.insert(candidates.end(), p.critical_values().begin(),
                      p.critical_values().end());
    for (double y : candidates) {
      if (!f.range().contains(y)) continue;
      breaks.push_back(y);
      try {
        (void)inverse_slope(p, y, options.tol, options.numeric);
      } catch (const SingularSlopeError&) {
        singular.push_back(y);
      } catch (const RangeError&) {
      }
    }
  }
  MeasureOptions captured = options;
  return DensityFunction::closed_form(
      f.range(),
      [shared, captured](double y) { return young_density(*shared, y, captured); },
      std::move(singular), std::move(breaks));
}

ScalarMeasureRCA young_measure(const MOscillatingFunction& f, const MeasureOptions& options) {
  const ValidationReport report = validate(f, 64, options.tol);
  if (!report.valid) {
    std::ostringstream os;
    os << "function is not a valid oscillating function:";
    for (const Violation& v : report.violations) os << " [" << v.code << "] " << v.message << ";";
    throw ConstructionError(os.str());
  }

  ScalarMeasureRCA m;
  m.range = f.range();
  m.young = true;
  const double M = f.domain().measure();
  std::vector<Atom> atoms;
  bool any_diffeomorphic = false;
  for (const Piece& p : f.pieces()) {
    if (p.is_constant())
      atoms.push_back({p.constant_value(), p.length() / M});
    else
      any_diffeomorphic = true;
  }
  m.atoms = AtomList::merged(std::move(atoms), options.atom_snap);
  if (any_diffeomorphic)
    m.density = young_density_function(f, options).tabulated(options.grid_size,
                                                             options.quadrature);

  const double prob_tol = f.all_closed_form() ? 1e-6 : 1e-4;
  if (!is_probability(m, prob_tol, options.quadrature)) {
    std::ostringstream os;
    os << "Young measure is not a probability measure (total variation "
       << tv_norm(m, options.quadrature) << ")";
    throw ConstructionError(os.str());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Monte-Carlo pushforward

Histogram pushforward_empirical(const MOscillatingFunction& f, std::size_t n_samples,
                                std::uint64_t seed, std::size_t n_bins,
                                const MeasureOptions& options, unsigned workers) {
  if (n_samples == 0 || n_bins == 0)
    throw PreconditionError("pushforward needs samples and bins");
  const CounterRng rng(seed);
  const Domain1D& dom = f.domain();
  std::vector<double> values(n_samples);

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = dom.lower() + dom.measure() * rng.uniform(i);
      values[i] = evaluate(f, std::clamp(x, std::nextafter(dom.lower(), dom.upper()),
                                         std::nextafter(dom.upper(), dom.lower())));
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_samples)));
  if (workers == 1) {
    fill(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = std::min(n_samples, chunk * w);
      const std::size_t e = std::min(n_samples, b + chunk);
      pool.emplace_back(fill, b, e);
    }
    for (auto& t : pool) t.join();
  }
  std::sort(values.begin(), values.end());

  Histogram h;
  h.range = f.range();
  h.n_bins = n_bins;
  h.sample_count = n_samples;
  h.seed = seed;
  std::vector<std::size_t> counts(n_bins, 0);
  const double n = static_cast<double>(n_samples);
  const auto min_count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(options.min_point_mass * n)));
  const double width = h.range.length();

  auto bin_of = [&](double v) -> std::size_t {
    if (!(width > 0.0)) return 0;
    const double t = std::floor((v - h.range.lo) / width * static_cast<double>(n_bins));
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n_bins - 1)));
  };

  std::size_t i = 0;
  while (i < n_samples) {
    std::size_t j = i + 1;
    while (j < n_samples && values[j] - values[i] <= options.atom_snap) ++j;
    const std::size_t run = j - i;
    if (run >= min_count) {
      h.point_masses.push_back({values[i + run / 2], static_cast<double>(run) / n});
    } else {
      for (std::size_t k = i; k < j; ++k) ++counts[bin_of(values[k])];
    }
    i = j;
  }
  h.masses.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) h.masses[k] = static_cast<double>(counts[k]) / n;
  return h;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

// Exact integral of the piecewise-linear interpolant over [a, b].
double integrate_grid(const std::span<const double> grid, const Interval& support, double a,
                      double b) {
  const std::size_t cells = grid.size() - 1;
  const double h = support.length() / static_cast<double>(cells);
  auto value_at = [&](double y) {
    const double t = (y - support.lo) / h;
    const double cell = std::clamp(std::floor(t), 0.0, static_cast<double>(cells - 1));
    const auto k = static_cast<std::size_t>(cell);
    return grid[k] + (grid[k + 1] - grid[k]) * (t - cell);
  };
  double total = 0.0;
  const double ta = (a - support.lo) / h;
  const double tb = (b - support.lo) / h;
  auto first = static_cast<std::size_t>(std::clamp(std::floor(ta), 0.0, double(cells - 1)));
  auto last = static_cast<std::size_t>(std::clamp(std::floor(tb), 0.0, double(cells - 1)));
  for (std::size_t k = first; k <= last; ++k) {
    const double lo = std::max(a, support.lo + h * static_cast<double>(k));
    const double hi = std::min(b, k + 1 == grid.size() - 1 ? support.hi
                                                           : support.lo + h * double(k + 1));
    if (hi > lo) total += 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
  }
  return total;
}

}  // namespace

double integrate_density(const DensityFunction& g, const Interval& a,
                         const QuadratureOptions& quad) {
  const Interval clipped = a.intersect(g.support());
  if (!(clipped.lo < clipped.hi)) return 0.0;
  if (!g.has_closed_form()) return integrate_grid(g.grid(), g.support(), clipped.lo, clipped.hi);
  const std::vector<double> splits = g.split_points();
  return integrate_adaptive([&g](double y) { return g(y); }, clipped, splits, quad).value;
}

double integrate_test(const ScalarMeasureRCA& m, const RealMap& phi,
                      const QuadratureOptions& quad) {
  double total = 0.0;
  if (m.density) {
    const DensityFunction& g = *m.density;
    const Interval s = g.support().intersect(m.range);
    if (s.lo < s.hi) {
      std::vector<double> splits = g.split_points();
      if (!g.has_closed_form()) {
        const double h = g.support().length() / static_cast<double>(g.grid().size() - 1);
        for (std::size_t k = 1; k + 1 < g.grid().size(); ++k)
          splits.push_back(g.support().lo + h * static_cast<double>(k));
      }
      total += integrate_adaptive([&](double y) { return phi(y) * g(y); }, s, splits, quad)
                   .value;
    }
  }
  for (const Atom& a : m.atoms.atoms()) total += a.weight * phi(a.location);
  return total;
}

double measure_of(const ScalarMeasureRCA& m, const Interval& a, const QuadratureOptions& quad) {
  double total = m.atoms.mass_in(a);
  if (m.density) total += integrate_density(*m.density, a.intersect(m.range), quad);
  return total;
}

double tv_norm(const ScalarMeasureRCA& m, const QuadratureOptions& quad) {
  double total = 0.0;
  for (const Atom& a : m.atoms.atoms()) total += std::abs(a.weight);
  if (m.density) {
    const DensityFunction& g = *m.density;
    const Interval s = g.support().intersect(m.range);
    if (s.lo < s.hi) {
      if (!g.has_closed_form()) {
        // |interpolant| integrates exactly when the grid is nonnegative.
        bool nonneg = std::all_of(g.grid().begin(), g.grid().end(),
                                  [](double v) { return v >= 0.0; });
        if (nonneg) return total + integrate_grid(g.grid(), g.support(), s.lo, s.hi);
      }
      const std::vector<double> splits = g.split_points();
      total += integrate_adaptive([&g](double y) { return std::abs(g(y)); }, s, splits, quad)
                   .value;
    }
  }
  return total;
}

bool is_probability(const ScalarMeasureRCA& m, double prob_tol, const QuadratureOptions& quad) {
  for (const Atom& a : m.atoms.atoms())
    if (!(a.weight > 0.0)) return false;
  if (m.density) {
    const DensityFunction& g = *m.density;
    constexpr std::size_t kProbe = 257;
    for (std::size_t k = 0; k < kProbe; ++k) {
      const double y = g.support().lo +
                       g.support().length() * static_cast<double>(k) / double(kProbe - 1);
      const double v = g(y);
      if (std::isnan(v) || v < 0.0) return false;
    }
  }
  try {
    return std::abs(tv_norm(m, quad) - 1.0) <= prob_tol;
  } catch (const QuadratureError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Oracle comparison

bool HistogramComparison::within(double k_standard_errors) const {
  return std::all_of(records.begin(), records.end(), [&](const BinDiscrepancy& r) {
    return r.discrepancy() <= k_standard_errors * r.standard_error;
  });
}

HistogramComparison compare_histogram_detailed(const ScalarMeasureRCA& m, const Histogram& h,
                                               const MeasureOptions& options) {
  HistogramComparison out;
  const double n = static_cast<double>(h.sample_count);
  auto se = [n](double p) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / n); };

  for (std::size_t k = 0; k < h.n_bins; ++k) {
    BinDiscrepancy r;
    r.lo = h.bin_lo(k);
    r.hi = h.bin_hi(k);
    r.model = m.density ? integrate_density(*m.density, {r.lo, r.hi}, options.quadrature) : 0.0;
    r.empirical = h.masses[k];
    r.standard_error = se(r.model);
    out.records.push_back(r);
  }

  std::vector<bool> matched(m.atoms.size(), false);
  for (const Atom& pm : h.point_masses) {
    BinDiscrepancy r;
    r.lo = r.hi = pm.location;
    r.atom = true;
    r.empirical = pm.weight;
    const auto atoms = m.atoms.atoms();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (!matched[j] && std::abs(atoms[j].location - pm.location) <= options.atom_snap) {
        matched[j] = true;
        r.model = atoms[j].weight;
        break;
      }
    }
    r.standard_error = se(r.model);
    out.records.push_back(r);
  }
  const auto atoms = m.atoms.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (matched[j]) continue;
    BinDiscrepancy r;
    r.lo = r.hi = atoms[j].location;
    r.atom = true;
    r.model = atoms[j].weight;
    r.standard_error = se(r.model);
    out.records.push_back(r);
  }

  for (const BinDiscrepancy& r : out.records) {
    out.max_discrepancy = std::max(out.max_discrepancy, r.discrepancy());
    const double units = r.standard_error > 0.0 ? r.discrepancy() / r.standard_error
                                                : (r.discrepancy() > 0.0 ? kInf : 0.0);
    out.max_standard_errors = std::max(out.max_standard_errors, units);
  }
  return out;
}

double compare_histogram(const ScalarMeasureRCA& m, const Histogram& h,
                         const MeasureOptions& options) {
  return compare_histogram_detailed(m, h, options).max_discrepancy;
}

}  // namespace ym
