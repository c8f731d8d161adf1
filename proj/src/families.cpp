#include "ym/families.hpp"

#include <vector>

#include "ym/errors.hpp"

namespace ym::families {

MOscillatingFunction identity() {
  return MOscillatingFunction(Domain1D(0.0, 1.0), {Piece::affine({0.0, 1.0}, 1.0, 0.0)});
}

MOscillatingFunction multi_tent(std::size_t teeth, double amplitude) {
  if (teeth == 0) throw ConstructionError("multi_tent needs at least one tooth");
  if (!(amplitude > 0.0)) throw ConstructionError("multi_tent needs a positive amplitude");
  const double width = 1.0 / static_cast<double>(teeth);
  const double slope = 2.0 * amplitude / width;
  std::vector<Piece> pieces;
  pieces.reserve(2 * teeth);
  for (std::size_t j = 0; j < teeth; ++j) {
    const double start = width * static_cast<double>(j);
    const double mid = start + 0.5 * width;
    const double end = j + 1 == teeth ? 1.0 : width * static_cast<double>(j + 1);
    pieces.push_back(Piece::affine({start, mid}, slope, -slope * start));
    pieces.push_back(Piece::affine({mid, end}, -slope, slope * end));
  }
  return MOscillatingFunction(Domain1D(0.0, 1.0), std::move(pieces),
                              Interval{0.0, amplitude});
}

MOscillatingFunction amplitude_tent_member(std::size_t n) {
  if (n == 0) throw ConstructionError("amplitude-tent index starts at 1");
  return amplitude_tent(1.0 + 1.0 / static_cast<double>(n));
}

MOscillatingFunction sine_wave(std::size_t n) {
  if (n == 0) throw ConstructionError("sine family index starts at 1");
  const double quarter = 1.0 / (4.0 * static_cast<double>(n));
  std::vector<Piece> pieces;
  pieces.reserve(4 * n);
  for (std::size_t k = 0; k < 4 * n; ++k) {
    const double lo = quarter * static_cast<double>(k);
    const double hi = k + 1 == 4 * n ? 1.0 : quarter * static_cast<double>(k + 1);
    pieces.push_back(Piece::sine({lo, hi}, 1.0, static_cast<double>(n), 0.0));
  }
  return MOscillatingFunction(Domain1D(0.0, 1.0), std::move(pieces), Interval{-1.0, 1.0});
}

MOscillatingFunction roubicek(std::size_t n, std::size_t explicit_pieces) {
  if (n == 0) throw ConstructionError("Roubicek family index starts at 1");
  if (explicit_pieces == 0) throw ConstructionError("need at least one explicit piece");
  const double nn = static_cast<double>(n);
  std::vector<Piece> pieces;
  pieces.reserve(explicit_pieces + 1);
  for (std::size_t k = 1; k <= explicit_pieces; ++k) {
    const double kk = static_cast<double>(k);
    const double lo = (kk - 1.0) / (nn + kk - 1.0);
    const double hi = kk / (nn + kk);
    if (k % 2 == 1) {
      // (x (n+k-1) - k + 1) (n+k)/n
      const double slope = (nn + kk - 1.0) * (nn + kk) / nn;
      pieces.push_back(Piece::affine({lo, hi}, slope, -(kk - 1.0) * (nn + kk) / nn));
    } else {
      // (k - x (n+k)) (n+k-1)/n
      const double slope = -(nn + kk) * (nn + kk - 1.0) / nn;
      pieces.push_back(Piece::affine({lo, hi}, slope, kk * (nn + kk - 1.0) / nn));
    }
  }
  // Tail closure: affine 0 -> 1 on [K/(n+K), 1).
  const double kk = static_cast<double>(explicit_pieces);
  const double tail_lo = kk / (nn + kk);
  const double tail_slope = 1.0 / (1.0 - tail_lo);
  pieces.push_back(Piece::affine({tail_lo, 1.0}, tail_slope, -tail_slope * tail_lo));
  return MOscillatingFunction(Domain1D(0.0, 1.0), std::move(pieces), Interval{0.0, 1.0});
}

MOscillatingFunction ramp_then_constant() {
  return MOscillatingFunction(Domain1D(0.0, 1.0), {Piece::affine({0.0, 0.5}, 2.0, 0.0),
                                                   Piece::constant({0.5, 1.0}, 0.5)});
}

MOscillatingFunction constant_function(double value) {
  return MOscillatingFunction(Domain1D(0.0, 1.0), {Piece::constant({0.0, 1.0}, value)});
}

}  // namespace ym::families
