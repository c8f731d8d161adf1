#pragma once

// Reference computations that do not go through the library. Values frozen
// in the tests are checked against these.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

using Fn = std::function<double(double)>;

// Composite Simpson rule with n (even) cells.
inline double simpson(const Fn& f, double a, double b, std::size_t n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
  return s * h / 3.0;
}

// Composite midpoint rule; safe for integrands singular at a or b.
inline double midpoint(const Fn& f, double a, double b, std::size_t n = 200000) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += f(a + h * (static_cast<double>(k) + 0.5));
  return s * h;
}

// Share of a midpoint grid of n points in (a, b) with f(x) in [lo, hi].
inline double image_share(const Fn& f, double a, double b, double lo, double hi,
                          std::size_t n = 1000000) {
  const double h = (b - a) / static_cast<double>(n);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = f(a + h * (static_cast<double>(k) + 0.5));
    if (lo <= y && y <= hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

// Density of the image of dx/(b - a) under f at y, from image shares of
// [y - w, y + w].
inline double image_density(const Fn& f, double a, double b, double y, double w = 1e-3,
                            std::size_t n = 4000000) {
  return image_share(f, a, b, y - w, y + w, n) / (2.0 * w);
}

// Bisection root of a monotone g on [a, b] for g(x) = y.
inline double bisect(const Fn& g, double a, double b, double y) {
  const bool increasing = g(b) >= g(a);
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double m = 0.5 * (a + b);
    if ((g(m) < y) == increasing)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

inline double tent(double x) { return x < 0.5 ? 2.0 * x : 2.0 - 2.0 * x; }

inline double arcsine_pdf(double y) { return 1.0 / (std::numbers::pi * std::sqrt(1.0 - y * y)); }

}  // namespace oracle
