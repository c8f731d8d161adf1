#include "ym/relaxation.hpp"

#include <algorithm>
#include <vector>

#include "ym/errors.hpp"
#include "ym/quadrature.hpp"

namespace ym::relaxation {

MOscillatingFunction sawtooth(std::size_t n) {
  if (n == 0) throw ConstructionError("sawtooth index starts at 1");
  const double nn = static_cast<double>(n);
  std::vector<Piece> pieces;
  pieces.reserve(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double start = static_cast<double>(j) / nn;
    const double end = j + 1 == n ? 1.0 : static_cast<double>(j + 1) / nn;
    const double q1 = start + 0.25 / nn;
    const double q3 = start + 0.75 / nn;
    pieces.push_back(Piece::affine({start, q1}, 1.0, -start));
    pieces.push_back(Piece::affine({q1, q3}, -1.0, start + 0.5 / nn));
    pieces.push_back(Piece::affine({q3, end}, 1.0, -end));
  }
  const double peak = 0.25 / nn;
  return MOscillatingFunction(Domain1D(0.0, 1.0), std::move(pieces), Interval{-peak, peak});
}

namespace {

double piece_slope(const Piece& p, double x) {
  if (p.affine_slope()) return *p.affine_slope();
  return forward_derivative(p, x);
}

// Sum over pieces of the integral of integrand(piece, x) on the piece.
template <typename Integrand>
double integrate_pieces(const MOscillatingFunction& u, double quad_tol,
                        Integrand&& integrand) {
  QuadratureOptions opts;
  opts.tolerance = quad_tol / static_cast<double>(std::max<std::size_t>(1, u.pieces().size()));
  double total = 0.0;
  for (const Piece& p : u.pieces()) {
    total += integrate_adaptive([&](double x) { return integrand(p, x); }, p.subinterval(),
                                {}, opts)
                 .value;
  }
  return total;
}

}  // namespace

double bolza_functional(const MOscillatingFunction& u, double quad_tol) {
  const BolzaIntegrand w;
  return integrate_pieces(u, quad_tol, [&](const Piece& p, double x) {
    return w(p.forward(x), piece_slope(p, x));
  });
}

ScalarMeasureRCA gradient_young_measure(const MOscillatingFunction& u) {
  std::vector<Atom> atoms;
  for (const Piece& p : u.pieces()) {
    if (!p.affine_slope())
      throw UnsupportedError("gradient Young measure needs affine or constant pieces");
    atoms.push_back({*p.affine_slope(), p.length()});
  }
  AtomList merged = AtomList::merged(std::move(atoms), 0.0);
  std::vector<Atom> normalized(merged.atoms().begin(), merged.atoms().end());
  for (Atom& a : normalized) a.weight /= u.domain().measure();

  ScalarMeasureRCA m;
  m.atoms = AtomList(std::move(normalized));
  m.range = {m.atoms.atoms().front().location, m.atoms.atoms().back().location};
  m.young = true;
  return m;
}

double relaxed_value(const ScalarMeasureRCA& nu, const RealMap& phi, const RealMap& w,
                     const Domain1D& domain, double quad_tol) {
  QuadratureOptions opts;
  opts.tolerance = quad_tol;
  const double mean = integrate_test(nu, phi, opts);
  const double mass = integrate_adaptive(w, domain.closure(), {}, opts).value;
  return mean * mass;
}

double gradient_functional(const MOscillatingFunction& u, const RealMap& phi,
                           const RealMap& w, double quad_tol) {
  return integrate_pieces(u, quad_tol, [&](const Piece& p, double x) {
    return phi(piece_slope(p, x)) * w(x);
  });
}

}  // namespace ym::relaxation
