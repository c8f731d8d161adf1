#pragma once

#include <cstddef>

#include "ym/function_model.hpp"
#include "ym/measure.hpp"

// The Bolza example: J(u) = int_0^1 u^2 + ((u')^2 - 1)^2 dx has infimum 0,
// approached by ever finer sawtooth oscillations and never attained.
namespace ym::relaxation {

/// Integrand W(u, p) = u^2 + (p^2 - 1)^2.
struct BolzaIntegrand {
  double operator()(double u, double p) const noexcept {
    const double q = p * p - 1.0;
    return u * u + q * q;
  }
};

/// u_n(x) = u(n x) / n with u the unit sawtooth
///   x on [0, 1/4), 1/2 - x on [1/4, 3/4), x - 1 on [3/4, 1),
/// extended with period 1. Built from 3n affine pieces of slope +-1.
MOscillatingFunction sawtooth(std::size_t n);

/// J(u) by piecewise quadrature. Affine pieces use their exact slope,
/// other pieces a central difference.
double bolza_functional(const MOscillatingFunction& u, double quad_tol = 1e-9);

/// Law of u' under dx/M: one atom per distinct slope with the total length
/// of the pieces carrying it. Throws UnsupportedError for non-affine pieces.
ScalarMeasureRCA gradient_young_measure(const MOscillatingFunction& u);

/// (integral of phi d nu) * (integral of w over the domain): the limit of
/// int phi(v_n(x)) w(x) dx for a sequence generating the homogeneous nu.
double relaxed_value(const ScalarMeasureRCA& nu, const RealMap& phi, const RealMap& w,
                     const Domain1D& domain = Domain1D(0.0, 1.0), double quad_tol = 1e-9);

/// int phi(u'(x)) w(x) dx by piecewise quadrature, for comparison with
/// relaxed_value along a sequence.
double gradient_functional(const MOscillatingFunction& u, const RealMap& phi,
                           const RealMap& w, double quad_tol = 1e-9);

}  // namespace ym::relaxation
