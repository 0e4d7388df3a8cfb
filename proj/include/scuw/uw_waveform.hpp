#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scuw/modem.hpp"
#include "scuw/pulse.hpp"
#include "scuw/sc_waveform.hpp"
#include "scuw/types.hpp"

namespace scuw {

/// M contiguous subcarriers of an N-point symbol. Logical frequency kappa in
/// [first_freq, first_freq + M) occupies DFT bin kappa mod N and carries the
/// spreader output with index kappa mod M. Keeping the spreader index tied to
/// the logical frequency makes cyclic band extensions (windowing, the SC
/// transmitter's spectral images) line up with the same spread symbols.
struct SubcarrierMap {
  std::size_t n = 768;
  std::size_t m = 512;
  long first_freq = -256;

  std::size_t start_bin() const;
  std::size_t bin(long kappa) const;
  std::size_t spread_index(long kappa) const;
};

/// Band centred on DC: first_freq = -M/2.
SubcarrierMap centered_map(std::size_t m, std::size_t n);
SubcarrierMap centered_map(const Numerology& num);

/// Spreads a length-M vector and maps it onto the band with per-frequency
/// weights: Y[kappa mod N] += w_j * F_M(v)[kappa mod M], kappa = begin + j.
/// Weights may extend past the band on either side. Returns F_N^H Y.
ComplexVector spread_and_map(std::span<const Complex> v, std::size_t n, long begin,
                             std::span<const Complex> weights);

/// x = F_N^H Map F_M [h; d; t]. Length N.
ComplexVector uw_modulate_symbol(std::span<const Complex> data, const UniqueWord& uw,
                                 const SubcarrierMap& map);

/// Spread symbol extended cyclically over the window support, weighted by the
/// window gains and mapped; extension 0 reproduces uw_modulate_symbol.
ComplexVector uw_w_modulate(std::span<const Complex> data, const UniqueWord& uw,
                            const SubcarrierMap& map, const FrequencyWindow& window);

/// Prepends the last n_cp samples of the first symbol; the rest are
/// concatenated back to back.
SamplePacket uw_assemble_packet(const std::vector<ComplexVector>& symbols, std::size_t n_cp);

/// min(floor(M_t N / M), N / 8).
std::size_t default_cp_length(const Numerology& n);

/// sqrt(N) F_N [h; 0]: the circular channel eigenvalues at DFT size N.
ComplexVector channel_frequency_response(const ChannelRealization& h, std::size_t n);

/// Per-band-bin MMSE gains for the single-stage receiver. Entry j refers to
/// logical frequency first_freq + j. The composite response is
/// Q_j = H(kappa) * tx_weight_j; tx_weights defaults to all ones.
EqualizerGains build_mmse_uw(const ChannelRealization& h, const SubcarrierMap& map,
                             double noise_var, std::span<const Complex> tx_weights = {});

/// F_M^H Map^H E F_N e, split into [h; d; t] parts.
SymbolEstimates uw_demodulate(std::span<const Complex> symbol, const SubcarrierMap& map,
                              const EqualizerGains& eq, const Numerology& n);

/// First-phase-then-amplitude equalizer over an extended support.
///
/// received_bins[j] and response[j] refer to logical frequency begin + j,
/// where response is the composite channel times transmit weight G. Stage 1
/// rotates each bin by conj(G)/|G| and scales it by |G| (the SNR weight);
/// bins sharing a spreader index are summed. Stage 2 divides the sum by
/// sum|G|^2 + noise_var. Bins with G == 0 contribute nothing. Output is
/// indexed by spreader index, ready for F_M^H.
ComplexVector two_stage_combine(std::span<const Complex> received_bins,
                                std::span<const Complex> response, long begin, std::size_t m,
                                double noise_var);

/// two_stage_combine with G = channel_freq .* window gains over the window
/// support (channel_freq indexed like received_bins).
ComplexVector two_stage_equalize(std::span<const Complex> received_bins,
                                 std::span<const Complex> channel_freq,
                                 const FrequencyWindow& window, const SubcarrierMap& map,
                                 double noise_var);

/// Post-combining SNR per spreader index, sum |G|^2 / noise_var.
std::vector<double> two_stage_bin_snr(std::span<const Complex> response, long begin,
                                      std::size_t m, double noise_var);
/// Best single-alias SNR per spreader index, max |G|^2 / noise_var.
std::vector<double> best_alias_bin_snr(std::span<const Complex> response, long begin,
                                       std::size_t m, double noise_var);
/// mean over spreader indices of sum|G|^2 / (sum|G|^2 + noise_var).
double two_stage_signal_gain(std::span<const Complex> response, long begin, std::size_t m,
                             double noise_var);

/// Full two-stage receiver for one N-sample symbol. tx_weights covers logical
/// frequencies [begin, begin + |tx_weights|).
SymbolEstimates uw_demodulate_two_stage(std::span<const Complex> symbol,
                                        const ChannelRealization& h, long begin,
                                        std::span<const Complex> tx_weights, double noise_var,
                                        const Numerology& n);

}  // namespace scuw
