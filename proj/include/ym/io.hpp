#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ym/convergence.hpp"
#include "ym/function_model.hpp"
#include "ym/measure.hpp"

// Specification files and result exports.
//
// Function file:
//   { "domain": [a, b],
//     "pieces": [ { "interval": [s, t], "kind": K, "params": {...} }, ... ] }
// with kinds and their (all required) parameters
//   affine   {slope, intercept}        slope*x + intercept
//   sin      {amplitude, frequency, phase}   amplitude*sin(2 pi frequency x + phase)
//   power    {exponent}                sign(x)|x|^exponent
//   constant {value}
//   expr     {expression}              arithmetic in x, see Expression
//
// Sequence file:
//   { "family": "sin" | "roubicek" | "amplitude_tent" | "custom",
//     "params": {...}, "indices": [n_min, n_max] }
// roubicek accepts {"explicit_pieces": K}; custom requires {"members": [...]}
// holding one function object per index.
//
// Nonhomogeneous family file:
//   { "family": "triangular" | "uniform" | "discontinuous",
//     "x0": 0.5, "indices": [n_min, n_max], "approach": "above" | "below" }
// describing the points x_n = x0 +- 1/n.
//
// Unknown keys are rejected everywhere. Syntax errors carry line/column,
// schema errors a JSON pointer to the offending value.
namespace ym::io {

enum class SequenceFamily { sine, roubicek, amplitude_tent, custom };

struct SequenceSpec {
  SequenceFamily family = SequenceFamily::sine;
  std::size_t n_min = 1;
  std::size_t n_max = 1;
  std::size_t explicit_pieces = 64;
  std::vector<MOscillatingFunction> custom_members;

  /// f_n for n in [first, last].
  std::vector<MOscillatingFunction> members(std::size_t first, std::size_t last) const;
  std::vector<MOscillatingFunction> members() const { return members(n_min, n_max); }
};

enum class NonhomogeneousKind { triangular, uniform, discontinuous };

struct FamilySpec {
  NonhomogeneousKind kind = NonhomogeneousKind::triangular;
  double x0 = 0.5;
  std::size_t n_min = 3;
  std::size_t n_max = 1024;
  /// +1 for x0 + 1/n, -1 for x0 - 1/n.
  int approach = 1;

  NonhomogeneousDensityFamily family() const;
  std::vector<double> points() const;
};

MOscillatingFunction parse_function_spec(std::string_view text);
SequenceSpec parse_sequence_spec(std::string_view text);
FamilySpec parse_family_spec(std::string_view text);

/// Dispatches on the top-level keys: "domain" -> function, "family" ->
/// sequence.
std::variant<MOscillatingFunction, SequenceSpec> parse_spec(std::string_view text);

/// Shortest round-trip text: 17 significant digits, "inf"/"-inf"/"nan".
std::string format_number(double v);

/// Midpoints of grid_size equal cells of s.
std::vector<double> midpoint_grid(const Interval& s, std::size_t grid_size);

/// "y,g" rows of the density at the midpoint grid of its support.
std::string density_csv(const DensityFunction& g, std::size_t grid_size);

/// "y,Jt" rows of the total slope at the midpoint grid of range_K.
std::string slope_csv(const MOscillatingFunction& f, std::size_t grid_size,
                      const MeasureOptions& options = {});

/// { "density_grid": [...], "atoms": [[c, w], ...], "range": [lo, hi] }; the
/// grid spans the range, empty when the measure has no density part.
std::string measure_json(const ScalarMeasureRCA& m, std::size_t grid_size,
                         const QuadratureOptions& quad = {});

/// Inverse of measure_json: the density becomes a grid interpolant.
ScalarMeasureRCA measure_from_json(std::string_view text);

/// "bin_lo,bin_hi,mass" rows, then one row per point mass with
/// bin_lo == bin_hi == location.
std::string histogram_csv(const Histogram& h);

/// Per-set records plus a summary string.
std::string verdict_json(const ConvergenceVerdict& v);

/// "level,k,lo,hi,limit,residual" rows.
std::string verdict_csv(const ConvergenceVerdict& v);

std::string atoms_csv(const AtomList& atoms);

}  // namespace ym::io
