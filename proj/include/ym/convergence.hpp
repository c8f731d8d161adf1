#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ym/function_model.hpp"
#include "ym/measure.hpp"

namespace ym {

/// Lazily generated sequence n -> u_n of densities on a common range K.
struct DensitySequence {
  std::function<DensityFunction(std::size_t)> generator;
  Interval range{};
  std::size_t min_index = 1;
  std::size_t max_index = 0;

  DensityFunction operator()(std::size_t n) const { return generator(n); }
};

/// Same, at the level of measures (density part plus atoms).
struct MeasureSequence {
  std::function<ScalarMeasureRCA(std::size_t)> generator;
  Interval range{};
  std::size_t min_index = 1;
  std::size_t max_index = 0;
};

struct TestSet {
  std::size_t level = 0;
  std::size_t index = 0;
  Interval set{};
};

/// Dyadic subintervals of K for levels 0..depth: 2^(depth+1) - 1 closed
/// intervals, each level partitioning K. A finite stand-in for "every Borel
/// set", ordered by (level, index).
class BorelTestFamily {
 public:
  BorelTestFamily(Interval k, std::size_t depth);

  std::size_t depth() const noexcept { return depth_; }
  const Interval& range() const noexcept { return range_; }
  std::span<const TestSet> sets() const noexcept { return sets_; }
  std::size_t size() const noexcept { return sets_.size(); }

 private:
  Interval range_;
  std::size_t depth_;
  std::vector<TestSet> sets_;
};

struct SetRecord {
  TestSet set;
  double limit = 0.0;
  double residual = 0.0;
};

/// Outcome of a set-wise convergence test. A finite-sample surrogate: the
/// answer holds at the tested resolution, it is not a proof.
struct ConvergenceVerdict {
  bool converged = false;
  std::vector<SetRecord> per_set;
  double worst_residual = 0.0;
  /// Index range the Cauchy residual was measured over.
  std::pair<std::size_t, std::size_t> tail_window{0, 0};
};

struct DieudonneOptions {
  /// The Cauchy residual is measured over the last `tail_fraction` of the
  /// window [n_min, n_max] (at least two indices).
  double tail_fraction = 0.25;
  QuadratureOptions quadrature{};
};

/// First index of the tail used for the Cauchy residual.
std::size_t tail_start(std::size_t n_min, std::size_t n_max, double tail_fraction);

/// Set-wise convergence test of integrals I_n(A) over the tail of
/// [n_min, n_max]. residual(A) = max |I_n(A) - I_m(A)| over tail pairs,
/// limit(A) = I_{n_max}(A). Quadrature failures are rethrown as
/// QuadratureError naming the set.
ConvergenceVerdict dieudonne_check(const DensitySequence& seq, const BorelTestFamily& family,
                                   std::size_t n_min, std::size_t n_max, double tol,
                                   const DieudonneOptions& options = {});

/// The same test on measures nu_n(A) = integral of the density over A plus
/// the atoms in A.
ConvergenceVerdict measure_setwise_check(const MeasureSequence& seq,
                                         const BorelTestFamily& family, std::size_t n_min,
                                         std::size_t n_max, double tol,
                                         const DieudonneOptions& options = {});

/// Tabulated u_{n_ref} as the representative of the weak limit. Requires a
/// converged verdict whose tail ends at n_ref; throws PreconditionError
/// otherwise.
DensityFunction weak_limit_estimate(const DensitySequence& seq,
                                    const ConvergenceVerdict& verdict, std::size_t n_ref,
                                    std::size_t grid_size,
                                    const QuadratureOptions& quad = {});

/// True iff n -> total_slope(f_n, y) is nondecreasing (within tol) for every
/// y in y_grid, or nonincreasing for every y. The direction is taken from
/// the first grid point where the sequence moves.
bool monotone_slope_check(std::span<const MOscillatingFunction> fs,
                          std::span<const double> y_grid, double tol,
                          const MeasureOptions& options = {});

/// 101 interior points of the intersection of the ranges of fs.
std::vector<double> common_interior_grid(std::span<const MOscillatingFunction> fs,
                                         std::size_t points = 101);

struct ConvergeOptions {
  /// Sequence index of fs[0].
  std::size_t first_index = 1;
  std::size_t grid_size = 1024;
  double slope_tol = 1e-9;
  MeasureOptions measure{};
  DieudonneOptions dieudonne{};
};

struct ConvergeResult {
  ConvergenceVerdict verdict;
  std::optional<ScalarMeasureRCA> limit;
};

/// Young-measure sequence of fs under the monotone-total-slope hypothesis.
/// Throws PreconditionError if the slopes are not monotone or some f_n has
/// constant pieces. On convergence the limit is the homogeneous measure
/// whose density is the weak-limit representative.
ConvergeResult converge_young(std::span<const MOscillatingFunction> fs,
                              const BorelTestFamily& family, double tol,
                              const ConvergeOptions& options = {});

/// Density sequence n -> young density of fs[n - first_index] on the hull of
/// their ranges.
DensitySequence young_density_sequence(std::span<const MOscillatingFunction> fs,
                                       std::size_t first_index = 1,
                                       const MeasureOptions& options = {});

/// Family x -> h_x of probability densities on a fixed K.
struct NonhomogeneousDensityFamily {
  Domain1D domain;
  Interval range{};
  std::function<DensityFunction(double)> evaluator;

  DensityFunction operator()(double x) const { return evaluator(x); }
};

/// For each test set, |integral_A h_{x_n} - integral_A h_{x0}| at the last
/// x_n; converged iff every such residual is <= tol.
/// The verdict's tail_window holds positions in xs, not sequence indices.
ConvergenceVerdict weak_continuity_check(const NonhomogeneousDensityFamily& fam,
                                         std::span<const double> xs, double x0,
                                         const BorelTestFamily& family, double tol,
                                         const QuadratureOptions& quad = {});

/// Max L1 distance between h_x and h_x' over x_samples midpoints of the
/// domain is <= tol.
bool homogeneity_check(const NonhomogeneousDensityFamily& fam, std::size_t x_samples,
                       double tol, const QuadratureOptions& quad = {});

/// L1 distance between two densities.
double l1_distance(const DensityFunction& a, const DensityFunction& b, const Interval& range,
                   const QuadratureOptions& quad = {});

namespace families {

/// x -> 2 h_x on K = [0, 2], h_x(y) = y/x on [0, x), (1 - y)/(1 - x) on
/// [x, 1), zero on [1, 2].
NonhomogeneousDensityFamily triangular();

/// h_x = uniform density 1/2 on [0, 2] for every x.
NonhomogeneousDensityFamily uniform_family();

/// Uniform on [0, 2] for x < 1/2, arcsine law rescaled to [0, 2] for
/// x >= 1/2.
NonhomogeneousDensityFamily discontinuous_family();

/// Uniform probability density on [lo, hi].
DensityFunction uniform_density(double lo, double hi);

/// 1 / (pi sqrt(1 - y^2)) on [-1, 1].
DensityFunction arcsine_density();

/// u_n uniform on [0, 1] for odd n and on [0, 2] for even n.
DensitySequence alternating_uniform(std::size_t max_index);

}  // namespace families

}  // namespace ym
