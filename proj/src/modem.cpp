#include "scuw/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scuw {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

// 16QAM per-rail Gray levels, index = 2-bit label.
constexpr double kQam16Level[4] = {-3.0, -1.0, 3.0, 1.0};

unsigned qam16_rail_bits(double v) {
  const double s = v / kInvSqrt10;
  if (s < -2.0) return 0b00;
  if (s < 0.0) return 0b01;
  if (s < 2.0) return 0b11;
  return 0b10;
}

}  // namespace

Modulation parse_modulation(const std::string& name) {
  if (name == "bpsk") return Modulation::bpsk;
  if (name == "qpsk") return Modulation::qpsk;
  if (name == "16qam" || name == "qam16") return Modulation::qam16;
  throw std::invalid_argument("unknown modulation '" + name + "' (expected bpsk, qpsk or 16qam)");
}

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::bpsk: return "bpsk";
    case Modulation::qpsk: return "qpsk";
    case Modulation::qam16: return "16qam";
  }
  return "?";
}

std::size_t Constellation::bits_per_symbol() const {
  switch (kind) {
    case Modulation::bpsk: return 1;
    case Modulation::qpsk: return 2;
    case Modulation::qam16: return 4;
  }
  return 0;
}

Constellation make_constellation(Modulation kind) {
  Constellation c;
  c.kind = kind;
  const std::size_t bps = c.bits_per_symbol();
  c.order = std::size_t{1} << bps;
  c.points.reserve(c.order);
  for (unsigned label = 0; label < c.order; ++label) {
    Bits bits(bps);
    for (std::size_t k = 0; k < bps; ++k) bits[k] = (label >> (bps - 1 - k)) & 1u;
    c.points.push_back(map_bits(bits, c)[0]);
    c.labels.push_back(label);
  }
  double energy = 0.0;
  for (const auto& p : c.points) energy += std::norm(p);
  energy /= static_cast<double>(c.order);
  if (std::abs(energy - 1.0) > 1e-12) throw std::logic_error("constellation energy is not unity");
  return c;
}

ComplexVector map_bits(std::span<const std::uint8_t> bits, const Constellation& c) {
  const std::size_t bps = c.bits_per_symbol();
  if (bits.size() % bps != 0) {
    throw std::invalid_argument("map_bits: " + std::to_string(bits.size()) +
                                " bits is not a multiple of " + std::to_string(bps));
  }
  ComplexVector out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::uint8_t* b = bits.data() + s * bps;
    switch (c.kind) {
      case Modulation::bpsk:
        out[s] = b[0] ? -1.0 : 1.0;
        break;
      case Modulation::qpsk:
        out[s] = Complex(b[0] ? -kInvSqrt2 : kInvSqrt2, b[1] ? -kInvSqrt2 : kInvSqrt2);
        break;
      case Modulation::qam16: {
        const unsigned i_label = (b[0] & 1u) << 1 | (b[1] & 1u);
        const unsigned q_label = (b[2] & 1u) << 1 | (b[3] & 1u);
        out[s] = Complex(kQam16Level[i_label], kQam16Level[q_label]) * kInvSqrt10;
        break;
      }
    }
  }
  return out;
}

Bits demap_hard(std::span<const Complex> symbols, const Constellation& c) {
  const std::size_t bps = c.bits_per_symbol();
  Bits out(symbols.size() * bps);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::uint8_t* b = out.data() + s * bps;
    const Complex z = symbols[s];
    switch (c.kind) {
      case Modulation::bpsk:
        b[0] = z.real() < 0.0;
        break;
      case Modulation::qpsk:
        b[0] = z.real() < 0.0;
        b[1] = z.imag() < 0.0;
        break;
      case Modulation::qam16: {
        const unsigned i_label = qam16_rail_bits(z.real());
        const unsigned q_label = qam16_rail_bits(z.imag());
        b[0] = (i_label >> 1) & 1u;
        b[1] = i_label & 1u;
        b[2] = (q_label >> 1) & 1u;
        b[3] = q_label & 1u;
        break;
      }
    }
  }
  return out;
}

std::pair<ComplexVector, ComplexVector> golay_pair(std::size_t exponent,
                                                   std::span<const int> delays,
                                                   std::span<const int> weights) {
  if (exponent == 0 || exponent > 24) throw std::invalid_argument("golay_pair: exponent out of range");
  if (delays.size() != exponent || weights.size() != exponent) {
    throw std::invalid_argument("golay_pair: need exactly `exponent` delays and weights");
  }
  std::vector<int> sorted(delays.begin(), delays.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < exponent; ++k) {
    if (sorted[k] != (1 << k)) {
      throw std::invalid_argument("golay_pair: delays must be a permutation of 1, 2, 4, ...");
    }
    if (weights[k] != 1 && weights[k] != -1) {
      throw std::invalid_argument("golay_pair: weights must be +1 or -1");
    }
  }
  const std::size_t n = std::size_t{1} << exponent;
  std::vector<int> a(n, 0), b(n, 0);
  a[0] = b[0] = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    const auto d = static_cast<std::size_t>(delays[k]);
    const int w = weights[k];
    std::vector<int> na(n), nb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int shifted = i >= d ? b[i - d] : 0;
      na[i] = w * a[i] + shifted;
      nb[i] = w * a[i] - shifted;
    }
    a.swap(na);
    b.swap(nb);
  }
  ComplexVector ga(n), gb(n);
  for (std::size_t i = 0; i < n; ++i) {
    ga[i] = static_cast<double>(a[i]);
    gb[i] = static_cast<double>(b[i]);
  }
  return {std::move(ga), std::move(gb)};
}

ComplexVector aperiodic_autocorrelation(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  ComplexVector r(2 * n - 1);
  for (std::size_t lag = 0; lag < n; ++lag) {
    Complex acc{};
    for (std::size_t i = 0; i + lag < n; ++i) acc += x[i + lag] * std::conj(x[i]);
    r[n - 1 + lag] = acc;
    r[n - 1 - lag] = std::conj(acc);
  }
  return r;
}

UniqueWord make_unique_word(ComplexVector symbols, std::size_t m_h) {
  if (symbols.empty() || m_h > symbols.size()) {
    throw std::invalid_argument("unique word: head length exceeds the sequence length");
  }
  UniqueWord uw;
  uw.m_h = m_h;
  uw.m_t = symbols.size() - m_h;
  uw.symbols = std::move(symbols);
  return uw;
}

UniqueWord default_unique_word(std::size_t m_s, std::size_t m_h) {
  std::size_t exponent = 0;
  while ((std::size_t{1} << exponent) < m_s) ++exponent;
  if ((std::size_t{1} << exponent) != m_s || exponent == 0) {
    throw std::invalid_argument("default unique word: M_s must be a power of two");
  }
  std::vector<int> delays, weights;
  if (exponent == 6) {
    delays = {2, 1, 4, 8, 16, 32};
    weights = {1, 1, -1, -1, 1, -1};
  } else {
    for (std::size_t k = 0; k < exponent; ++k) {
      delays.push_back(1 << k);
      weights.push_back(1);
    }
  }
  auto [ga, gb] = golay_pair(exponent, delays, weights);
  return make_unique_word(std::move(ga), m_h);
}

}  // namespace scuw
