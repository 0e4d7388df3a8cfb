#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scuw/modem.hpp"
#include "scuw/pulse.hpp"
#include "scuw/types.hpp"

namespace scuw {

/// Block sizes and rates of the SC / UW chains.
///
/// m symbols per block, of which m_s are the known word (m_t tail part,
/// m_h head part) and m_d data; up-sampling a, down-sampling b; filter
/// lengths l_tx, l_rx. n_g is the receiver discard count and n_t the
/// transmitter offset, both in output-rate samples.
struct Numerology {
  std::size_t m = 512;
  std::size_t m_s = 64;
  std::size_t m_h = 9;
  std::size_t a = 3;
  std::size_t b = 2;
  std::size_t l_tx = 67;
  std::size_t l_rx = 67;
  std::size_t n_g = 54;
  long n_t = 99;

  std::size_t m_t() const { return m_s - m_h; }
  std::size_t m_d() const { return m - m_s; }
  std::size_t k() const { return a * m; }
  std::size_t n() const { return a * m / b; }
  std::size_t o_tx() const { return (l_tx - 1) / b; }
  std::size_t o_rx() const { return (l_rx - 1) / b; }
  std::size_t t_tx() const { return (a * m + l_tx - 1) / b; }
  /// Samples carried by the UW-only trailer: ceil((a m_s + l_tx - 1) / b).
  std::size_t trailer_length() const { return (a * m_s + l_tx - 1 + b - 1) / b; }
};

/// 802.11ad-style defaults: M=512, M_s=64, M_h=9, a=3, b=2, 67-tap filters,
/// N_t from the alignment condition and N_g = default_guard(., 10).
Numerology default_numerology();

struct ValidationReport {
  bool structure_ok = true;  ///< integrality / ordering of the sizes
  bool guard_ok = true;      ///< O_tx + L <= N_g <= (a/b) M_s - O_rx
  bool isi_ok = true;        ///< a M_s >= L_tx + L_rx + (L b + 1) - 3
  bool phase_aligned = true; ///< receiver decimation hits the pulse peak
  long guard_min = 0;
  long guard_max = 0;
  long isi_lhs = 0;
  long isi_rhs = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool ok() const { return structure_ok && guard_ok && isi_ok; }
};

/// Checks the numerology against a channel of memory L. Never throws.
ValidationReport validate_numerology(const Numerology& n, std::size_t channel_memory);

/// Receiver discard count for channel memory L: the value in the admissible
/// guard interval closest to its midpoint that also keeps the a-fold
/// decimation on the pulse peak. Falls back to the plain midpoint when no
/// aligned value exists. Throws std::invalid_argument if the interval is empty.
std::size_t default_guard(const Numerology& n, std::size_t channel_memory);

/// Transmitter offset that makes the transmit eigenvalues real:
/// (a (M_s - M_h) + (L_tx - 1) / 2) / b. Throws std::domain_error when this
/// is not an integer.
long aligned_tx_offset(const Numerology& n);

/// Throws std::invalid_argument for inconsistent sizes.
void require_valid_structure(const Numerology& n);

/// [s; d] (unique word first), the up-sampler input of one block.
ComplexVector sc_block_symbols(std::span<const Complex> data, const UniqueWord& uw);
/// [h; d; t], the same block rotated left by M_t: the DFT-spreader input.
ComplexVector spreader_input(std::span<const Complex> data, const UniqueWord& uw);
/// Splits a length-M despread vector ordered [h; d; t].
SymbolEstimates split_estimates(std::span<const Complex> v, std::size_t m_h, std::size_t m_d);

/// One SC block: sqrt(b) * down_b( f * up_a([s; d]) ), T_tx samples.
ComplexVector sc_modulate_block(std::span<const Complex> data, const UniqueWord& uw,
                                const Numerology& n, const PulseShape& f);

/// Overlap-adds the blocks at offsets i*N and appends the UW-only trailer;
/// length = N * blocks + trailer_length().
SamplePacket sc_assemble_packet(const std::vector<ComplexVector>& blocks, const UniqueWord& uw,
                                const Numerology& n, const PulseShape& f);

/// Convenience: modulate and assemble a packet from per-block data vectors.
SamplePacket sc_packet(const std::vector<ComplexVector>& data, const UniqueWord& uw,
                       const Numerology& n, const PulseShape& f);

/// N + O_rx samples starting at origin + N_g + i*N. Throws std::out_of_range.
ComplexVector epoch_extract(std::span<const Complex> received, std::size_t i, const Numerology& n,
                            long origin = 0);

/// Cascade f * g * up_b(h).
ComplexVector effective_response(const ChannelRealization& h, const PulseShape& f,
                                 const PulseShape& g, std::size_t b);

/// Per-bin response Q = sqrt(M) F_M down_a circ(h_eff padded to aM, tau0),
/// tau0 = a M_t - b N_g - L_rx + 1, and MMSE gains conj(Q)/(|Q|^2 + noise_var).
/// Throws if the cascade is longer than aM.
EqualizerGains build_mmse_sc(const ChannelRealization& h, const PulseShape& f,
                             const PulseShape& g, const Numerology& n, double noise_var);

/// The a per-alias components q_p of Q (Q = sum_p q_p):
/// q_p[k] = (1/a) * (sqrt(aM) F_aM circ(h_eff, tau0))[k + p M].
std::vector<ComplexVector> sc_alias_response(const ChannelRealization& h, const PulseShape& f,
                                             const PulseShape& g, const Numerology& n);

/// Largest wrapped phase difference between the aliases of any bin, over
/// aliases whose magnitude is at least rel_floor times the largest one.
double max_alias_phase_spread(const std::vector<ComplexVector>& aliases, double rel_floor = 1e-6);

/// Time-domain receiver on one epoch: the last N samples are up-sampled by b,
/// circularly filtered with g, down-sampled by a and scaled by sqrt(b), then
/// equalized in the M-point DFT domain. Output ordered [h; d; t].
SymbolEstimates sc_demodulate_epoch(std::span<const Complex> epoch, const PulseShape& g,
                                    const Numerology& n, const EqualizerGains& eq);

/// Transmit eigenvalues sqrt(aM) F_aM circ(f padded, tau1), tau1 = a M_t - b N_t.
DiagonalOperator sc_tx_eigenvalues(const PulseShape& f, const Numerology& n);
/// Receive eigenvalues sqrt(aM) F_aM g padded (no shift).
DiagonalOperator sc_rx_eigenvalues(const PulseShape& g, const Numerology& n);

/// DFT-domain transmitter: F_N^H fold_b( lambda .* tile_a(F_M [h; d; t]) ) / sqrt(a).
/// The result is the N-sample packet slice starting at N_t + i*N.
ComplexVector sc_modulate_block_dft(std::span<const Complex> data, const UniqueWord& uw,
                                    const Numerology& n, const DiagonalOperator& lambda);

/// The a spectral images seen by the DFT-domain receiver before they are
/// summed: image p is (upsilon .* tile_b(F_N m))[pM : (p+1)M] / sqrt(a).
std::vector<ComplexVector> sc_receiver_aliases(std::span<const Complex> core,
                                               const DiagonalOperator& upsilon, const Numerology& n);

/// DFT-domain receiver on the N-sample epoch core m:
/// F_M^H E fold_a( upsilon .* tile_b(F_N m) ) / sqrt(a).
SymbolEstimates sc_demodulate_epoch_dft(std::span<const Complex> core,
                                        const DiagonalOperator& upsilon, const EqualizerGains& eq,
                                        const Numerology& n);

}  // namespace scuw
