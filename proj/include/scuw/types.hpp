#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace scuw {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Bits = std::vector<std::uint8_t>;

/// Per-bin multiplicative gains at a fixed DFT size (a diagonal matrix in the
/// unitary DFT basis).
struct DiagonalOperator {
  ComplexVector gains;

  std::size_t size() const { return gains.size(); }
};

/// A transmitted or received complex baseband sample stream.
struct SamplePacket {
  ComplexVector samples;

  std::size_t size() const { return samples.size(); }
};

/// Despread/equalized symbol estimates of one block, split into the head
/// sequence, the data symbols and the tail sequence.
struct SymbolEstimates {
  ComplexVector head;
  ComplexVector data;
  ComplexVector tail;
};

/// Multipath impulse response h_0..h_L. Generated channels carry unit total
/// power; imported ones are used as given.
struct ChannelRealization {
  ComplexVector taps{Complex{1.0, 0.0}};

  std::size_t memory() const { return taps.empty() ? 0 : taps.size() - 1; }
};

/// Per-bin equalizer E and the channel response Q it was designed for
/// (both in the unitary DFT basis of the despreading transform).
struct EqualizerGains {
  ComplexVector gains;
  ComplexVector response;
  double noise_var = 0.0;

  std::size_t size() const { return gains.size(); }
  /// mean(E .* Q): the average gain on the wanted symbol. Dividing estimates
  /// by it removes the MMSE amplitude bias.
  Complex mean_signal_gain() const;
};

/// Per-bin MMSE gains conj(q) / (|q|^2 + noise_var); bins with q == 0 get 0.
EqualizerGains mmse_gains(ComplexVector response, double noise_var);

}  // namespace scuw
