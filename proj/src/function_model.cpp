#include "ym/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ym/errors.hpp"

namespace ym {
namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_subinterval(const Interval& sub) {
  if (!(sub.lo < sub.hi))
    throw ConstructionError("empty subinterval [" + describe(sub.lo) + ", " +
                            describe(sub.hi) + "]");
}

}  // namespace

Domain1D::Domain1D(double lower, double upper)
    : lower_(lower), upper_(upper), measure_(upper - lower) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw DomainError("domain requires lower < upper, got (" + describe(lower) + ", " +
                      describe(upper) + ")");
}

// ---------------------------------------------------------------------------
// Piece

void Piece::finish() {
  if (kind_ == PieceKind::constant) {
    image_ = {constant_value_, constant_value_};
    return;
  }
  const double a = forward_(sub_.lo);
  const double b = forward_(sub_.hi);
  image_ = {std::min(a, b), std::max(a, b)};
}

Piece Piece::diffeomorphic(Interval sub, RealMap forward, std::optional<RealMap> inverse,
                           std::optional<RealMap> inverse_derivative,
                           std::vector<double> critical_values, PieceShape shape) {
  require_subinterval(sub);
  Piece p;
  p.sub_ = sub;
  p.kind_ = PieceKind::diffeomorphic;
  p.shape_ = shape;
  p.forward_ = std::move(forward);
  p.inverse_ = std::move(inverse);
  p.inverse_derivative_ = std::move(inverse_derivative);
  p.critical_values_ = std::move(critical_values);
  p.finish();
  return p;
}

Piece Piece::constant(Interval sub, double value) {
  require_subinterval(sub);
  Piece p;
  p.sub_ = sub;
  p.kind_ = PieceKind::constant;
  p.shape_ = PieceShape::constant;
  p.constant_value_ = value;
  p.forward_ = [value](double) { return value; };
  p.affine_slope_ = 0.0;
  p.label_ = "constant " + describe(value);
  p.finish();
  return p;
}

Piece Piece::affine(Interval sub, double slope, double intercept) {
  require_subinterval(sub);
  Piece p;
  p.sub_ = sub;
  p.kind_ = PieceKind::diffeomorphic;
  p.shape_ = PieceShape::affine;
  p.forward_ = [slope, intercept](double x) { return slope * x + intercept; };
  if (slope != 0.0) {
    p.inverse_ = [slope, intercept](double y) { return (y - intercept) / slope; };
    const double inv = 1.0 / std::abs(slope);
    p.inverse_derivative_ = [inv](double) { return inv; };
  }
  p.affine_slope_ = slope;
  p.label_ = "affine " + describe(slope) + "*x+" + describe(intercept);
  p.finish();
  return p;
}

Piece Piece::sine(Interval sub, double amplitude, double frequency, double phase) {
  require_subinterval(sub);
  if (amplitude == 0.0 || frequency == 0.0)
    throw ConstructionError("sine piece needs nonzero amplitude and frequency");
  using std::numbers::pi;
  const double omega = 2.0 * pi * frequency;
  Piece p;
  p.sub_ = sub;
  p.kind_ = PieceKind::diffeomorphic;
  p.shape_ = PieceShape::sine;
  p.forward_ = [=](double x) { return amplitude * std::sin(omega * x + phase); };

  // Monotone branch [k pi - pi/2, k pi + pi/2] containing the middle phase.
  const double theta_mid = omega * 0.5 * (sub.lo + sub.hi) + phase;
  const double branch = std::round(theta_mid / pi);
  const double parity = std::fmod(std::abs(branch), 2.0) == 0.0 ? 1.0 : -1.0;
  p.inverse_ = [=](double y) {
    const double r = std::clamp(y / amplitude, -1.0, 1.0);
    const double theta = branch * pi + parity * std::asin(r);
    return (theta - phase) / omega;
  };
  const double scale = std::abs(omega * amplitude);
  p.inverse_derivative_ = [=](double y) {
    const double r = y / amplitude;
    const double c = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
    return 1.0 / (scale * c);
  };
  for (double x : {sub.lo, sub.hi}) {
    if (std::abs(std::cos(omega * x + phase)) < 1e-9)
      p.critical_values_.push_back(p.forward_(x) > 0 ? std::abs(amplitude)
                                                     : -std::abs(amplitude));
  }
  p.label_ = "sin " + describe(amplitude) + "*sin(2pi*" + describe(frequency) + "*x+" +
             describe(phase) + ")";
  p.finish();
  return p;
}

Piece Piece::power(Interval sub, double exponent) {
  require_subinterval(sub);
  if (exponent == 0.0) throw ConstructionError("power piece needs a nonzero exponent");
  Piece p;
  p.sub_ = sub;
  p.kind_ = PieceKind::diffeomorphic;
  p.shape_ = PieceShape::power;
  p.forward_ = [exponent](double x) {
    return std::copysign(std::pow(std::abs(x), exponent), x);
  };
  const double inv_exp = 1.0 / exponent;
  p.inverse_ = [inv_exp](double y) {
    return std::copysign(std::pow(std::abs(y), inv_exp), y);
  };
  p.inverse_derivative_ = [inv_exp](double y) {
    return std::abs(inv_exp) * std::pow(std::abs(y), inv_exp - 1.0);
  };
  if (exponent > 1.0 && sub.lo <= 0.0 && 0.0 <= sub.hi) p.critical_values_.push_back(0.0);
  p.label_ = "power " + describe(exponent);
  p.finish();
  return p;
}

Piece Piece::expression(Interval sub, RealMap forward, std::string label) {
  Piece p = diffeomorphic(sub, std::move(forward), std::nullopt, std::nullopt, {},
                          PieceShape::expression);
  p.label_ = std::move(label);
  return p;
}

Piece Piece::without_closed_forms() const {
  Piece p = *this;
  p.inverse_.reset();
  p.inverse_derivative_.reset();
  return p;
}

// ---------------------------------------------------------------------------
// MOscillatingFunction

MOscillatingFunction::MOscillatingFunction(Domain1D domain, std::vector<Piece> pieces,
                                           std::optional<Interval> range)
    : domain_(domain), pieces_(std::move(pieces)) {
  std::stable_sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
    return a.sub_lower() < b.sub_lower();
  });
  if (range) {
    range_ = *range;
  } else if (!pieces_.empty()) {
    range_ = pieces_.front().image();
    for (const Piece& p : pieces_) range_ = range_.hull(p.image());
  }
}

bool MOscillatingFunction::has_constant_pieces() const noexcept {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.is_constant(); });
}

bool MOscillatingFunction::all_closed_form() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
    return p.is_constant() || p.inverse_derivative().has_value();
  });
}

bool MOscillatingFunction::all_affine() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.affine_slope().has_value(); });
}

MOscillatingFunction MOscillatingFunction::without_closed_forms() const {
  std::vector<Piece> stripped;
  stripped.reserve(pieces_.size());
  for (const Piece& p : pieces_) stripped.push_back(p.without_closed_forms());
  return MOscillatingFunction(domain_, std::move(stripped), range_);
}

// ---------------------------------------------------------------------------
// validate

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ValidationReport validate(const MOscillatingFunction& f, std::size_t samples_per_piece,
                          double tol) {
  ValidationReport report;
  auto flag = [&](std::string code, long piece, std::string message, double measured) {
    report.violations.push_back({std::move(code), piece, std::move(message), measured});
  };
  samples_per_piece = std::max<std::size_t>(samples_per_piece, 3);

  const auto pieces = f.pieces();
  const Domain1D& dom = f.domain();
  if (pieces.empty()) {
    flag("no_pieces", -1, "function has no pieces", 0.0);
    report.valid = false;
    return report;
  }

  // Partition: containment, overlap, coverage.
  double cursor = dom.lower();
  double gap_total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Interval& s = pieces[i].subinterval();
    const long idx = static_cast<long>(i);
    if (s.lo < dom.lower() - tol || s.hi > dom.upper() + tol)
      flag("outside_domain", idx,
           "subinterval [" + describe(s.lo) + ", " + describe(s.hi) + "] leaves the domain",
           std::max(dom.lower() - s.lo, s.hi - dom.upper()));
    if (i + 1 < pieces.size()) {
      const double overlap = s.hi - pieces[i + 1].sub_lower();
      if (overlap > tol)
        flag("overlapping_subintervals", idx,
             "piece overlaps piece " + std::to_string(i + 1), overlap);
    }
    if (s.lo > cursor) gap_total += s.lo - cursor;
    cursor = std::max(cursor, s.hi);
  }
  if (dom.upper() > cursor) gap_total += dom.upper() - cursor;
  if (gap_total > tol)
    flag("coverage_gap", -1, "pieces leave a gap of total length " + describe(gap_total),
         gap_total);

  NumericOptions numeric;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    const long idx = static_cast<long>(i);
    const double lo = p.sub_lower();
    const double step = p.length() / static_cast<double>(samples_per_piece - 1);

    std::vector<double> xs(samples_per_piece), ys(samples_per_piece);
    bool finite = true;
    for (std::size_t k = 0; k < samples_per_piece; ++k) {
      xs[k] = k + 1 == samples_per_piece ? p.sub_upper() : lo + step * static_cast<double>(k);
      ys[k] = p.forward(xs[k]);
      if (!std::isfinite(ys[k])) {
        flag("non_finite_value", idx, "forward is not finite at x=" + describe(xs[k]), xs[k]);
        finite = false;
        break;
      }
    }
    if (!finite) continue;

    // Range containment.
    for (double y : ys) {
      if (y < f.range().lo - tol || y > f.range().hi + tol) {
        flag("range_mismatch", idx, "value " + describe(y) + " lies outside range_K", y);
        break;
      }
    }

    if (p.is_constant()) continue;

    // Strict monotonicity: forward differences must keep one strict sign.
    int direction = 0;
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < samples_per_piece; ++k) {
      const double d = ys[k + 1] - ys[k];
      const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
      if (s == 0) {
        flag("non_monotone_piece", idx, "forward is flat near x=" + describe(xs[k]), xs[k]);
        monotone = false;
        break;
      }
      if (direction == 0) {
        direction = s;
      } else if (s != direction) {
        flag("non_monotone_piece", idx,
             "forward differences change sign near x=" + describe(xs[k]), xs[k]);
        monotone = false;
        break;
      }
    }
    if (!monotone) continue;

    if (p.inverse()) {
      double worst = 0.0;
      for (double y : ys) worst = std::max(worst, std::abs(p.forward((*p.inverse())(y)) - y));
      if (worst > std::max(tol, 1e-12 * std::max(1.0, std::abs(f.range().hi))) * 10.0)
        flag("inverse_mismatch", idx, "forward(inverse(y)) differs from y by " + describe(worst),
             worst);
    }
    if (p.inverse_derivative()) {
      // Interior samples only; endpoints may be critical.
      double worst = 0.0;
      for (std::size_t k = 1; k + 1 < samples_per_piece; ++k) {
        const double d = forward_derivative(p, xs[k], numeric);
        if (std::abs(d) < 1e-3) continue;
        const double expected = 1.0 / std::abs(d);
        const double got = (*p.inverse_derivative())(ys[k]);
        worst = std::max(worst, std::abs(got - expected) / expected);
      }
      if (worst > std::max(tol, 1e-6))
        flag("inverse_derivative_mismatch", idx,
             "inverse derivative disagrees with 1/|forward'| (relative " + describe(worst) + ")",
             worst);
    }
  }

  // range_K must be covered by the union of the piece images.
  std::vector<Interval> images;
  for (const Piece& p : pieces) images.push_back(p.image());
  std::sort(images.begin(), images.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = f.range().lo;
  double hole = 0.0;
  for (const Interval& im : images) {
    if (im.lo > reach) hole += im.lo - reach;
    reach = std::max(reach, im.hi);
  }
  if (f.range().hi > reach) hole += f.range().hi - reach;
  if (hole > tol)
    flag("range_mismatch", -1,
         "range_K is not the closure of the piece images (uncovered length " +
             describe(hole) + ")",
         hole);

  report.valid = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------
// evaluation and inversion

std::size_t locate_piece(const MOscillatingFunction& f, double x) {
  const Domain1D& dom = f.domain();
  if (!dom.contains(x))
    throw DomainError("x=" + describe(x) + " is outside the domain (" +
                      describe(dom.lower()) + ", " + describe(dom.upper()) + ")");
  const auto pieces = f.pieces();
  if (pieces.empty()) throw DomainError("function has no pieces");
  // First piece whose right endpoint is >= x; it owns (lo, hi].
  auto it = std::lower_bound(pieces.begin(), pieces.end(), x,
                             [](const Piece& p, double v) { return p.sub_upper() < v; });
  if (it == pieces.end()) return pieces.size() - 1;
  if (x <= it->sub_lower() && it != pieces.begin()) --it;
  return static_cast<std::size_t>(it - pieces.begin());
}

double evaluate(const MOscillatingFunction& f, double x) {
  return f.pieces()[locate_piece(f, x)].forward(x);
}

namespace {

double checked_target(const Piece& p, double y, double tol) {
  if (p.is_constant()) throw KindError("constant piece has no inverse");
  const Interval& im = p.image();
  if (!(y >= im.lo - tol && y <= im.hi + tol))
    throw RangeError("y=" + describe(y) + " is outside the piece image [" + describe(im.lo) +
                     ", " + describe(im.hi) + "]");
  return std::clamp(y, im.lo, im.hi);
}

}  // namespace

double invert_piece(const Piece& p, double y, double tol, const NumericOptions& options) {
  y = checked_target(p, y, tol);
  double lo = p.sub_lower();
  double hi = p.sub_upper();
  if (p.inverse()) return std::clamp((*p.inverse())(y), lo, hi);

  // Image endpoints map to subinterval endpoints; bisection would stop
  // anywhere in the flat floating-point neighbourhood of a critical end.
  if (y == p.forward(lo)) return lo;
  if (y == p.forward(hi)) return hi;
  const bool increasing = p.forward(hi) >= p.forward(lo);
  for (int it = 0; it < options.root_max_iterations && hi - lo > options.root_width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = p.forward(mid) - y;
    if (g == 0.0) return mid;
    if ((g < 0.0) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  const double mid = 0.5 * (lo + hi);
  double best = mid;
  double best_residual = std::abs(p.forward(mid) - y);
  for (double c : {lo, hi}) {
    const double r = std::abs(p.forward(c) - y);
    if (r < best_residual) {
      best = c;
      best_residual = r;
    }
  }
  return best;
}

double forward_derivative(const Piece& p, double x, const NumericOptions& options) {
  if (p.affine_slope()) return *p.affine_slope();
  const double h = options.fd_relative_step * p.length();
  x = std::clamp(x, p.sub_lower(), p.sub_upper());
  // Second-order one-sided stencils within h of an end.
  if (x - p.sub_lower() < h)
    return (-3.0 * p.forward(x) + 4.0 * p.forward(x + h) - p.forward(x + 2.0 * h)) / (2.0 * h);
  if (p.sub_upper() - x < h)
    return (3.0 * p.forward(x) - 4.0 * p.forward(x - h) + p.forward(x - 2.0 * h)) / (2.0 * h);
  return (p.forward(x + h) - p.forward(x - h)) / (2.0 * h);
}

double inverse_slope(const Piece& p, double y, double tol, const NumericOptions& options) {
  y = checked_target(p, y, tol);
  if (p.inverse_derivative()) {
    const double v = (*p.inverse_derivative())(y);
    if (!std::isfinite(v) || v * options.derivative_floor > 1.0)
      throw SingularSlopeError("inverse slope is singular at y=" + describe(y), y);
    return v;
  }
  const double x = invert_piece(p, y, tol, options);
  const double d = std::abs(forward_derivative(p, x, options));
  // Below the rounding resolution of the stencil a derivative is
  // indistinguishable from zero.
  const double h = options.fd_relative_step * p.length();
  const double scale = std::max(std::abs(p.forward(x)), p.image().length());
  const double resolution = 16.0 * std::numeric_limits<double>::epsilon() * scale / h;
  if (!(d >= std::max(options.derivative_floor, resolution)))
    throw SingularSlopeError("forward derivative vanishes at y=" + describe(y), y);
  return 1.0 / d;
}

}  // namespace ym
