#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ym/interval.hpp"

namespace ym {

using RealMap = std::function<double(double)>;

/// Tunables shared by inversion and slope evaluation.
struct NumericOptions {
  /// Bisection stops once the bracket is this narrow...
  double root_width = 1e-12;
  /// ...or after this many halvings.
  int root_max_iterations = 200;
  /// Central-difference step as a fraction of the piece length.
  double fd_relative_step = 1e-6;
  /// |forward'| below this is treated as a singular inverse slope.
  double derivative_floor = 1e-10;
};

/// The open interval (lower, upper) with Lebesgue measure M = upper - lower.
/// The normalized measure is dx / M.
class Domain1D {
 public:
  Domain1D(double lower, double upper);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double measure() const noexcept { return measure_; }
  Interval closure() const noexcept { return {lower_, upper_}; }
  bool contains(double x) const noexcept { return lower_ < x && x < upper_; }

 private:
  double lower_;
  double upper_;
  double measure_;
};

enum class PieceKind { diffeomorphic, constant };

/// How a piece was built; closed forms exist for every shape but `expression`
/// and `custom` (unless supplied explicitly).
enum class PieceShape { affine, sine, power, constant, expression, custom };

/// One branch f_i of an oscillating function on its subinterval.
class Piece {
 public:
  /// Generic monotone branch. `inverse_derivative` is the magnitude of the
  /// derivative of the inverse (the 1-D Jacobian of f_i^{-1}); it is the hook
  /// for higher-dimensional Jacobian evaluators. `critical_values` lists
  /// images of interior points where forward' vanishes.
  static Piece diffeomorphic(Interval sub, RealMap forward,
                             std::optional<RealMap> inverse = std::nullopt,
                             std::optional<RealMap> inverse_derivative = std::nullopt,
                             std::vector<double> critical_values = {},
                             PieceShape shape = PieceShape::custom);

  static Piece constant(Interval sub, double value);

  /// x -> slope * x + intercept.
  static Piece affine(Interval sub, double slope, double intercept);

  /// x -> amplitude * sin(2 pi frequency x + phase).
  static Piece sine(Interval sub, double amplitude, double frequency, double phase);

  /// x -> sign(x) |x|^exponent.
  static Piece power(Interval sub, double exponent);

  /// Arbitrary map without closed-form inverse; `label` is kept for export.
  static Piece expression(Interval sub, RealMap forward, std::string label);

  const Interval& subinterval() const noexcept { return sub_; }
  double sub_lower() const noexcept { return sub_.lo; }
  double sub_upper() const noexcept { return sub_.hi; }
  double length() const noexcept { return sub_.hi - sub_.lo; }

  PieceKind kind() const noexcept { return kind_; }
  PieceShape shape() const noexcept { return shape_; }
  bool is_constant() const noexcept { return kind_ == PieceKind::constant; }

  double forward(double x) const { return forward_(x); }
  const std::optional<RealMap>& inverse() const noexcept { return inverse_; }
  const std::optional<RealMap>& inverse_derivative() const noexcept {
    return inverse_derivative_;
  }
  double constant_value() const noexcept { return constant_value_; }

  /// Exact derivative for affine and constant pieces.
  std::optional<double> affine_slope() const noexcept { return affine_slope_; }

  /// Closed image [min, max] of forward over the closed subinterval (endpoint
  /// values; exact when the piece is monotone).
  const Interval& image() const noexcept { return image_; }

  std::span<const double> critical_values() const noexcept { return critical_values_; }

  const std::string& label() const noexcept { return label_; }

  /// Copy that forgets closed-form inverse and inverse derivative, forcing
  /// the bisection and finite-difference fallbacks.
  Piece without_closed_forms() const;

 private:
  Piece() = default;
  void finish();

  Interval sub_{};
  PieceKind kind_ = PieceKind::diffeomorphic;
  PieceShape shape_ = PieceShape::custom;
  RealMap forward_;
  std::optional<RealMap> inverse_;
  std::optional<RealMap> inverse_derivative_;
  std::vector<double> critical_values_;
  std::optional<double> affine_slope_;
  double constant_value_ = 0.0;
  Interval image_{};
  std::string label_;
};

/// f = sum_i f_i 1_{Omega_i} over a finite partition of the domain.
/// Pieces are kept sorted by left endpoint; no validation happens here.
class MOscillatingFunction {
 public:
  /// range_K defaults to the hull of the piece images.
  MOscillatingFunction(Domain1D domain, std::vector<Piece> pieces,
                       std::optional<Interval> range = std::nullopt);

  const Domain1D& domain() const noexcept { return domain_; }
  std::span<const Piece> pieces() const noexcept { return pieces_; }
  const Interval& range() const noexcept { return range_; }

  bool has_constant_pieces() const noexcept;
  bool all_closed_form() const noexcept;
  bool all_affine() const noexcept;

  MOscillatingFunction without_closed_forms() const;

 private:
  Domain1D domain_;
  std::vector<Piece> pieces_;
  Interval range_;
};

struct Violation {
  std::string code;
  /// Index into f.pieces(), or -1 for function-level problems.
  long piece = -1;
  std::string message;
  double measured = 0.0;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;

  bool has(std::string_view code) const;
};

/// Checks the partition, range and per-piece hypotheses at sample
/// resolution. Monotonicity is judged from sign changes of forward
/// differences on `samples_per_piece` evenly spaced points, so a piece that
/// wiggles between samples can pass. Problems are reported, never thrown.
ValidationReport validate(const MOscillatingFunction& f, std::size_t samples_per_piece = 64,
                          double tol = 1e-9);

/// f(x) for x in the open domain. Boundary points between pieces belong to
/// the left piece. Throws DomainError outside the domain.
double evaluate(const MOscillatingFunction& f, double x);

/// Index of the piece used by evaluate(f, x).
std::size_t locate_piece(const MOscillatingFunction& f, double x);

/// Preimage of y under a diffeomorphic piece. Uses the closed-form inverse
/// when present, otherwise bisection on the subinterval.
/// Throws KindError for constant pieces and RangeError for y off the image.
double invert_piece(const Piece& p, double y, double tol = 1e-9,
                    const NumericOptions& options = {});

/// |d f_i^{-1} / dy| at y. Throws SingularSlopeError where forward' vanishes:
/// below derivative_floor, or for numeric pieces below the rounding
/// resolution of the difference stencil.
double inverse_slope(const Piece& p, double y, double tol = 1e-9,
                     const NumericOptions& options = {});

/// Exact slope for affine pieces, otherwise a central difference with step
/// fd_relative_step * length, switching to a second-order one-sided stencil
/// within one step of either end.
double forward_derivative(const Piece& p, double x, const NumericOptions& options = {});

}  // namespace ym
