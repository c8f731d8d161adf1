#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ym/function_model.hpp"
#include "ym/interval.hpp"
#include "ym/quadrature.hpp"

namespace ym {

/// Density with respect to Lebesgue measure on a closed support interval.
///
/// Either a closed-form evaluator (possibly with a tabulation kept alongside
/// for export) or a piecewise-linear interpolant on a uniform grid. Values
/// are zero outside the support and +infinity at singular points.
class DensityFunction {
 public:
  static DensityFunction closed_form(Interval support, RealMap evaluator,
                                     std::vector<double> singular_points = {},
                                     std::vector<double> breakpoints = {});

  /// Uniform grid over `support`, values.size() >= 2 nodes, endpoints included.
  static DensityFunction from_grid(Interval support, std::vector<double> values);

  double operator()(double y) const;

  const Interval& support() const noexcept { return support_; }
  bool has_closed_form() const noexcept { return static_cast<bool>(evaluator_); }
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> singular_points() const noexcept { return singular_; }
  /// Points where the density may jump or kink; quadrature splits there.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  /// Integration split points: breakpoints and singular points merged.
  std::vector<double> split_points() const;

  /// Copy carrying a `grid_size`-node tabulation over the support. A
  /// closed-form evaluator, when present, is retained and still used for
  /// evaluation. Non-finite nodes (singular endpoints) are replaced by the
  /// value that makes the trapezoid on the adjacent cell carry the exact
  /// cell mass.
  DensityFunction tabulated(std::size_t grid_size, const QuadratureOptions& quad = {}) const;

 private:
  DensityFunction() = default;
  double interpolate(double y) const;

  Interval support_{};
  RealMap evaluator_;
  std::vector<double> grid_;
  std::vector<double> singular_;
  std::vector<double> breakpoints_;
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finite list of point masses with strictly positive weights at pairwise
/// distinct locations, kept sorted by location.
class AtomList {
 public:
  AtomList() = default;
  /// Throws ConstructionError on a non-positive weight or repeated location.
  explicit AtomList(std::vector<Atom> atoms);

  /// Sums weights of atoms whose locations agree within `snap`.
  static AtomList merged(std::vector<Atom> atoms, double snap = 0.0);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_weight() const noexcept;
  /// Total weight of atoms located in [a.lo, a.hi].
  double mass_in(const Interval& a) const noexcept;

 private:
  std::vector<Atom> atoms_;
};

/// Element of rca(K): optional density part plus atoms.
struct ScalarMeasureRCA {
  Interval range{};
  std::optional<DensityFunction> density;
  AtomList atoms;
  /// Set for measures built as Young measures (expected to be probabilities).
  bool young = false;
};

/// Empirical image measure of the normalized Lebesgue measure.
struct Histogram {
  Interval range{};
  std::size_t n_bins = 0;
  std::vector<double> masses;
  std::vector<Atom> point_masses;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  double bin_lo(std::size_t k) const noexcept;
  double bin_hi(std::size_t k) const noexcept;
  double total_mass() const noexcept;
};

struct MeasureOptions {
  NumericOptions numeric{};
  QuadratureOptions quadrature{};
  /// Tabulation size retained with densities.
  std::size_t grid_size = 1024;
  /// Matching distance between empirical point masses and model atoms.
  double atom_snap = 1e-9;
  /// Minimum share of samples for a repeated value to count as a point mass.
  double min_point_mass = 1e-4;
  /// Tolerance passed to inverse_slope.
  double tol = 1e-9;
};

/// g(y) = (1/M) sum over diffeomorphic pieces whose image contains y of
/// |d f_i^{-1}/dy|. Images are taken as [lo, hi), or [lo, hi] for pieces
/// reaching the top of the range, so g is right-continuous at image
/// endpoints. Returns +infinity where some inverse slope is singular.
double young_density(const MOscillatingFunction& f, double y,
                     const MeasureOptions& options = {});

/// Jt_f(y) = M * young_density(f, y).
double total_slope(const MOscillatingFunction& f, double y,
                   const MeasureOptions& options = {});

/// Density of the Young measure of f as a closed form over range_K, with
/// piece image endpoints as breakpoints and singular slope values recorded.
DensityFunction young_density_function(const MOscillatingFunction& f,
                                       const MeasureOptions& options = {});

/// Homogeneous Young measure of f: density from the diffeomorphic pieces plus
/// one atom (c, |Omega_i|/M) per constant piece. Throws ConstructionError if
/// f fails validation or the result is not a probability measure.
ScalarMeasureRCA young_measure(const MOscillatingFunction& f,
                               const MeasureOptions& options = {});

/// Monte-Carlo image of the normalized Lebesgue measure under f, binned over
/// range_K. Value clusters within atom_snap holding at least
/// min_point_mass of the samples are reported as point masses. Deterministic
/// in (seed, n_samples, n_bins) and independent of `workers`.
Histogram pushforward_empirical(const MOscillatingFunction& f, std::size_t n_samples,
                                std::uint64_t seed, std::size_t n_bins,
                                const MeasureOptions& options = {},
                                unsigned workers = 1);

/// Integral of g over a, clipped to the support.
double integrate_density(const DensityFunction& g, const Interval& a,
                         const QuadratureOptions& quad = {});

/// Integral of phi against m: density part by quadrature plus atoms.
double integrate_test(const ScalarMeasureRCA& m, const RealMap& phi,
                      const QuadratureOptions& quad = {});

/// m(A) = integral of the density over A plus the weight of atoms in A.
double measure_of(const ScalarMeasureRCA& m, const Interval& a,
                  const QuadratureOptions& quad = {});

/// |m|(K).
double tv_norm(const ScalarMeasureRCA& m, const QuadratureOptions& quad = {});

/// Nonnegative density (sampled), positive weights, total variation 1.
bool is_probability(const ScalarMeasureRCA& m, double prob_tol,
                    const QuadratureOptions& quad = {});

struct BinDiscrepancy {
  double lo = 0.0;
  double hi = 0.0;
  double model = 0.0;
  double empirical = 0.0;
  /// Binomial standard error sqrt(p (1 - p) / n) at the model mass p.
  double standard_error = 0.0;
  /// True for a point-mass record (lo == hi == location).
  bool atom = false;

  double discrepancy() const noexcept { return model > empirical ? model - empirical : empirical - model; }
};

struct HistogramComparison {
  std::vector<BinDiscrepancy> records;
  double max_discrepancy = 0.0;
  /// Largest discrepancy in units of its standard error.
  double max_standard_errors = 0.0;

  bool within(double k_standard_errors) const;
};

/// Per-bin and per-atom comparison of a model measure with a histogram.
/// Unmatched atoms on either side count with their full mass.
HistogramComparison compare_histogram_detailed(const ScalarMeasureRCA& m, const Histogram& h,
                                               const MeasureOptions& options = {});

/// Sup-discrepancy over bins and atoms.
double compare_histogram(const ScalarMeasureRCA& m, const Histogram& h,
                         const MeasureOptions& options = {});

}  // namespace ym
