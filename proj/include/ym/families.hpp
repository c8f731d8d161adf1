#pragma once

#include <cstddef>

#include "ym/function_model.hpp"

// Named oscillating functions used throughout the tests, the acceptance
// suite and the CLI. All live on the domain (0, 1).
namespace ym::families {

/// f(x) = x.
MOscillatingFunction identity();

/// `teeth` up-down teeth of height `amplitude`; 2 * teeth affine pieces with
/// slopes +-2 * teeth * amplitude. The total slope is 1 / amplitude on
/// [0, amplitude].
MOscillatingFunction multi_tent(std::size_t teeth, double amplitude);

/// {2x on (0, 1/2), 2 - 2x on (1/2, 1)}.
inline MOscillatingFunction tent() { return multi_tent(1, 1.0); }

/// amplitude * tent(x).
inline MOscillatingFunction amplitude_tent(double amplitude) {
  return multi_tent(1, amplitude);
}

/// Amplitude 1 + 1/n, the nondecreasing-slope sequence.
MOscillatingFunction amplitude_tent_member(std::size_t n);

/// sin(2 n pi t) split into its 4n monotone quarter-period pieces.
MOscillatingFunction sine_wave(std::size_t n);

/// Nonperiodic sawtooth family with pieces
///   ((k-1)/(n+k-1), k/(n+k)), k = 1, 2, ...
/// rising 0 -> 1 for odd k and falling 1 -> 0 for even k. The partition has
/// infinitely many pieces accumulating at 1; the first `explicit_pieces` are
/// kept and the remaining interval [K/(n+K), 1) is closed by one affine piece
/// 0 -> 1, which carries exactly the pushforward mass of the discarded tail
/// (every tail piece maps its interval uniformly onto [0, 1]).
MOscillatingFunction roubicek(std::size_t n, std::size_t explicit_pieces = 64);

/// {2x on (0, 1/2), 1/2 on [1/2, 1)}: half of the mass sits in an atom.
MOscillatingFunction ramp_then_constant();

/// f == value on (0, 1).
MOscillatingFunction constant_function(double value);

}  // namespace ym::families
