#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scuw/types.hpp"

namespace scuw {

enum class Modulation { bpsk, qpsk, qam16 };

/// Parses "bpsk", "qpsk", "16qam" (also "qam16"). Throws std::invalid_argument.
Modulation parse_modulation(const std::string& name);
std::string to_string(Modulation m);

/// Gray-labelled unit-energy constellation. Point p carries the label
/// `labels[p]`, bits_per_symbol bits with the first bit as the MSB.
struct Constellation {
  Modulation kind = Modulation::qpsk;
  std::size_t order = 4;
  ComplexVector points;
  std::vector<unsigned> labels;

  std::size_t bits_per_symbol() const;
};

Constellation make_constellation(Modulation kind);

/// Gray mapping. BPSK 0 -> +1; QPSK one bit per rail, 0 -> +1/sqrt2;
/// 16QAM two bits per rail, 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 over sqrt(10).
/// Throws if |bits| is not a multiple of bits_per_symbol.
ComplexVector map_bits(std::span<const std::uint8_t> bits, const Constellation& c);

/// Minimum-distance hard decisions. The constellations are square grids, so
/// per-rail slicing is the exact nearest-point rule.
Bits demap_hard(std::span<const Complex> symbols, const Constellation& c);

/// Golay complementary pair of length 2^exponent from the delay/weight
/// recursion
///   a_k[n] = w_k a_{k-1}[n] + b_{k-1}[n - D_k]
///   b_k[n] = w_k a_{k-1}[n] - b_{k-1}[n - D_k]
/// started from unit impulses. Delays must be a permutation of
/// {1, 2, ..., 2^(exponent-1)} and weights must be +-1.
std::pair<ComplexVector, ComplexVector> golay_pair(std::size_t exponent,
                                                   std::span<const int> delays,
                                                   std::span<const int> weights);

/// Aperiodic autocorrelation r[k], k = -(n-1)..(n-1), stored at index k + n - 1.
ComplexVector aperiodic_autocorrelation(std::span<const Complex> x);

/// Known sequence s = [t; h]: the first m_t symbols form the tail part t, the
/// last m_h symbols the head part h.
struct UniqueWord {
  ComplexVector symbols;
  std::size_t m_t = 0;
  std::size_t m_h = 0;

  std::size_t size() const { return symbols.size(); }
  std::span<const Complex> tail() const { return {symbols.data(), m_t}; }
  std::span<const Complex> head() const { return {symbols.data() + m_t, m_h}; }
};

/// Checks |symbols| == m_t + m_h; throws std::invalid_argument otherwise.
UniqueWord make_unique_word(ComplexVector symbols, std::size_t m_h);

/// Ga of length 2^exponent with the 802.11ad delay/weight set
/// (exponent 6: D = [2 1 4 8 16 32], W = [1 1 -1 -1 1 -1]); for other
/// exponents D = [1 2 4 ...], W = +1.
UniqueWord default_unique_word(std::size_t m_s = 64, std::size_t m_h = 9);

}  // namespace scuw
