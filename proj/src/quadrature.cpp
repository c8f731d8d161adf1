#include "ym/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ym/errors.hpp"

namespace ym {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Parameter interval [a, b] inside [0, 1] of the mapped edge `edge`.
struct Segment {
  std::size_t edge;
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// Each edge [lo, hi] is integrated in t over [0, 1] through
// x = lo + (hi - lo) (3t^2 - 2t^3). The map has zero slope at both ends, which
// turns inverse square root endpoint singularities into smooth integrands.
struct MappedEdge {
  const std::function<double(double)>* f;
  double lo;
  double hi;

  double x(double t) const {
    const double len = hi - lo;
    if (t <= 0.5) return lo + len * t * t * (3.0 - 2.0 * t);
    const double u = 1.0 - t;
    return hi - len * u * u * (3.0 - 2.0 * u);
  }
  double operator()(double t) const {
    const double jac = 6.0 * (hi - lo) * t * (1.0 - t);
    if (jac == 0.0) return 0.0;
    return (*f)(x(t)) * jac;
  }
};

Segment gauss_kronrod(const MappedEdge& f, std::size_t edge, double a, double b,
                      std::size_t& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) {
    const double dx = half * kNodes[k];
    double fsum;
    if (k + 1 == kNodes.size()) {
      fsum = f(center);
      ++evaluations;
    } else {
      fsum = f(center - dx) + f(center + dx);
      evaluations += 2;
    }
    if (!std::isfinite(fsum)) {
      std::ostringstream os;
      const double xa = f.x(a);
      const double xb = f.x(b);
      os << "integrand is not finite near " << f.x(center - dx) << " in [" << xa << ", " << xb
         << "]";
      throw QuadratureError(os.str(), xa, xb, INFINITY);
    }
    kronrod += kKronrodWeights[k] * fsum;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * fsum;
  }
  return {edge, a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// A segment whose midpoint cannot be represented strictly inside it.
bool at_resolution_limit(double a, double b) {
  const double mid = 0.5 * (a + b);
  return !(a < mid && mid < b) || (b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                   std::max(std::abs(a), std::abs(b));
}

bool at_resolution_limit(const MappedEdge& e, const Segment& s) {
  return at_resolution_limit(s.a, s.b) || at_resolution_limit(e.x(s.a), e.x(s.b));
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, std::span<const double> split_points,
                                    const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) return result;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> edges{a};
  for (double s : split_points)
    if (a < s && s < b) edges.push_back(s);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<MappedEdge> mapped;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) mapped.push_back({&f, edges[i], edges[i + 1]});

  std::priority_queue<Segment> active;
  // Segments too narrow to bisect; their error is roundoff-bound.
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  double total_value = 0.0;
  double total_error = 0.0;

  auto admit = [&](const Segment& s) {
    total_value += s.value;
    total_error += s.error;
    if (at_resolution_limit(mapped[s.edge], s)) {
      frozen_value += s.value;
      frozen_error += s.error;
    } else {
      active.push(s);
    }
  };

  for (std::size_t i = 0; i < mapped.size(); ++i)
    admit(gauss_kronrod(mapped[i], i, 0.0, 1.0, result.evaluations));

  while (total_error - frozen_error > options.tolerance && !active.empty()) {
    if (result.subdivisions >= options.max_subdivisions) {
      const Segment& worst = active.top();
      std::ostringstream os;
      const double xa = mapped[worst.edge].x(worst.a);
      const double xb = mapped[worst.edge].x(worst.b);
      os << "quadrature did not converge after " << result.subdivisions
         << " subdivisions (error estimate " << total_error << ", worst segment [" << xa
         << ", " << xb << "])";
      throw QuadratureError(os.str(), xa, xb, total_error);
    }
    Segment worst = active.top();
    active.pop();
    total_value -= worst.value;
    total_error -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    admit(gauss_kronrod(mapped[worst.edge], worst.edge, worst.a, mid, result.evaluations));
    admit(gauss_kronrod(mapped[worst.edge], worst.edge, mid, worst.b, result.evaluations));
    ++result.subdivisions;
  }

  // A large residual stuck in unrefinable segments means the integrand is
  // not integrable there (e.g. 1/(b - y)).
  if (frozen_error > std::max(options.tolerance, 1e-7)) {
    std::ostringstream os;
    os << "quadrature stalled at floating-point resolution (error estimate "
       << frozen_error << ")";
    throw QuadratureError(os.str(), a, b, frozen_error);
  }

  // Re-sum to limit drift from the running add/subtract bookkeeping.
  double value = frozen_value;
  double error = frozen_error;
  while (!active.empty()) {
    value += active.top().value;
    error += active.top().error;
    active.pop();
  }
  result.value = sign * value;
  result.error = error;
  return result;
}

}  // namespace ym
