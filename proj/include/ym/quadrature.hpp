#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ym/interval.hpp"

namespace ym {

struct QuadratureOptions {
  /// Absolute tolerance on the total error estimate.
  double tolerance = 1e-9;
  /// Maximum number of bisections performed over the whole range.
  std::size_t max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of `f` over [a, b].
///
/// The range is first split at every point of `split_points` lying strictly
/// inside (a, b). Each piece [s, t] is integrated in a parameter u in [0, 1]
/// with x = s + (t - s)(3u^2 - 2u^3), whose vanishing slope at both ends
/// absorbs inverse square root singularities at split points and at a, b.
/// Nodes never coincide with piece endpoints. The parameter cell with the
/// largest error estimate is bisected until the summed estimate drops below
/// `options.tolerance`.
///
/// Throws QuadratureError if the tolerance is not met within
/// `options.max_subdivisions` bisections or the integrand is not finite at a
/// node.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, std::span<const double> split_points = {},
                                    const QuadratureOptions& options = {});

inline QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                           const Interval& range,
                                           std::span<const double> split_points = {},
                                           const QuadratureOptions& options = {}) {
  return integrate_adaptive(f, range.lo, range.hi, split_points, options);
}

}  // namespace ym
