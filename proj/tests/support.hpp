#pragma once
// Helpers shared by the unit tests and the acceptance runner. Everything here
// is written independently of the library code it checks.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>

#include "scuw/rng.hpp"
#include "scuw/sc_waveform.hpp"
#include "scuw/types.hpp"

namespace scuw::testing {

inline ComplexVector random_complex(std::size_t len, Engine& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexVector v(len);
  for (auto& x : v) x = Complex(normal(engine), normal(engine));
  return v;
}

inline ComplexVector random_qpsk(std::size_t len, Engine& engine) {
  std::uniform_int_distribution<int> coin(0, 1);
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector v(len);
  for (auto& x : v) x = Complex(coin(engine) ? s : -s, coin(engine) ? s : -s);
  return v;
}

/// ||x - y|| / ||y|| (absolute when y is zero).
inline double rel_error(std::span<const Complex> x, std::span<const Complex> y) {
  double e = 0.0, r = 0.0;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < n; ++k) {
    e += std::norm(x[k] - y[k]);
    r += std::norm(y[k]);
  }
  if (x.size() != y.size()) return INFINITY;
  return r > 0.0 ? std::sqrt(e / r) : std::sqrt(e);
}

/// O(n^2) unitary DFT.
inline ComplexVector naive_dft(std::span<const Complex> x, int sign = -1) {
  const std::size_t n = x.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = sign * 2.0 * std::numbers::pi * static_cast<double>((k * m) % n) /
                        static_cast<double>(n);
      acc += x[m] * Complex(std::cos(ph), std::sin(ph));
    }
    out[k] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

/// SC packet by direct summation: x[m] = sqrt(b) sum_k f[b m - k] u[k], where
/// u is the a-fold zero-stuffed stream [s; d_0], [s; d_1], ..., s.
inline ComplexVector sc_packet_oracle(const std::vector<ComplexVector>& data,
                                      std::span<const Complex> uw, const Numerology& n,
                                      std::span<const Complex> f, std::size_t length) {
  std::vector<Complex> symbols;
  for (const auto& d : data) {
    symbols.insert(symbols.end(), uw.begin(), uw.end());
    symbols.insert(symbols.end(), d.begin(), d.end());
  }
  symbols.insert(symbols.end(), uw.begin(), uw.end());
  ComplexVector x(length);
  const double g = std::sqrt(static_cast<double>(n.b));
  for (std::size_t m = 0; m < length; ++m) {
    Complex acc{};
    const long t = static_cast<long>(n.b * m);
    for (std::size_t j = 0; j < symbols.size(); ++j) {
      const long lag = t - static_cast<long>(n.a * j);
      if (lag >= 0 && lag < static_cast<long>(f.size())) acc += f[static_cast<std::size_t>(lag)] * symbols[j];
    }
    x[m] = g * acc;
  }
  return x;
}

/// How far the receiver's circular processing of one epoch departs from
/// linear processing of the whole stream. The receiver keeps the N samples
/// starting at `core_start`, up-samples by b, filters circularly with g and
/// keeps every a-th output; the reference applies the same steps linearly to
/// the full stream r. Returns ||circ - lin|| / ||lin||.
inline double cyclicity_residual(std::span<const Complex> r, long core_start, const Numerology& n,
                                 std::span<const Complex> g) {
  const long k = static_cast<long>(n.k());
  const long a = static_cast<long>(n.a), b = static_cast<long>(n.b);
  auto up_full = [&](long idx) -> Complex {  // up_b(r)[idx]
    if (idx < 0 || idx % b != 0) return {};
    const long s = idx / b;
    return s < static_cast<long>(r.size()) ? r[static_cast<std::size_t>(s)] : Complex{};
  };
  auto up_core = [&](long idx) -> Complex {  // up_b(core)[idx mod K]
    const long w = ((idx % k) + k) % k;
    if (w % b != 0) return {};
    return up_full(b * core_start + w);
  };
  double e = 0.0, p = 0.0;
  for (long j = 0; j < static_cast<long>(n.m); ++j) {
    Complex lin{}, circ{};
    for (long q = 0; q < static_cast<long>(g.size()); ++q) {
      lin += g[static_cast<std::size_t>(q)] * up_full(b * core_start + a * j - q);
      circ += g[static_cast<std::size_t>(q)] * up_core(a * j - q);
    }
    e += std::norm(circ - lin);
    p += std::norm(lin);
  }
  return std::sqrt(e / p);
}

}  // namespace scuw::testing
