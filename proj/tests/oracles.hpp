#pragma once

// Test-only reference constructions. These build states and values directly
// from their closed forms, without going through apply_gate, target_gate or
// the protocol code they are used to check.

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "crot/qmath.hpp"
#include "crot/rng.hpp"

namespace crot::oracle {

inline int parity_sign(std::size_t bits) { return (std::popcount(bits) % 2 == 0) ? 1 : -1; }

/// U(theta)|phi> on (A, B): each basis amplitude picks up exp(+-i theta/2)
/// by the parity of A xor B.
inline StateVector rotated(const StateVector& phi, double theta) {
  std::vector<Complex> out(4);
  for (std::size_t ab = 0; ab < 4; ++ab) {
    const double sign = parity_sign(ab);
    out[ab] = std::polar(1.0, sign * theta / 2.0) * phi.amplitude(ab);
  }
  return StateVector(phi.labels(), out);
}

/// cos(alpha/2)|0>_b Phi + i sin(alpha/2)|1>_b Z_A Phi over labels (A, B, b).
inline StateVector after_step2(const StateVector& phi, double alpha) {
  std::vector<Complex> amps(8);
  for (std::size_t ab = 0; ab < 4; ++ab) {
    const double z_a = (ab & 2U) ? -1.0 : 1.0;
    amps[(ab << 1) | 0U] = std::cos(alpha / 2.0) * phi.amplitude(ab);
    amps[(ab << 1) | 1U] = Complex(0.0, std::sin(alpha / 2.0)) * z_a * phi.amplitude(ab);
  }
  return StateVector({Qubit::AliceTarget, Qubit::BobTarget, Qubit::BobAncilla}, amps);
}

/// cos(alpha/2)|0>_b Phi + i sin(alpha/2)|1>_b Z_A Z_B Phi over labels (A, B, b).
inline StateVector after_step3(const StateVector& phi, double alpha) {
  std::vector<Complex> amps(8);
  for (std::size_t ab = 0; ab < 4; ++ab) {
    amps[(ab << 1) | 0U] = std::cos(alpha / 2.0) * phi.amplitude(ab);
    amps[(ab << 1) | 1U] = Complex(0.0, std::sin(alpha / 2.0)) * double(parity_sign(ab)) * phi.amplitude(ab);
  }
  return StateVector({Qubit::AliceTarget, Qubit::BobTarget, Qubit::BobAncilla}, amps);
}

/// Binary entropy via natural logs in long double.
inline double entropy_bits(double p) {
  const long double q = p;
  long double h = 0.0L;
  if (q > 0.0L) h -= q * std::log(q);
  if (q < 1.0L) h -= (1.0L - q) * std::log(1.0L - q);
  return static_cast<double>(h / std::log(2.0L));
}

inline StateVector random_ab(CounterRng& rng) {
  std::vector<Complex> amps(4);
  double n = 0.0;
  for (auto& a : amps) {
    a = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    n += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(n);
  return StateVector({Qubit::AliceTarget, Qubit::BobTarget}, amps);
}

inline Mat2 random_hermitian(CounterRng& rng) {
  Mat2 m;
  m(0, 0) = 4.0 * rng.uniform() - 2.0;
  m(1, 1) = 4.0 * rng.uniform() - 2.0;
  m(0, 1) = Complex(4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0);
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

}  // namespace crot::oracle
