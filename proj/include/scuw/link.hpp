#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scuw/modem.hpp"
#include "scuw/pulse.hpp"
#include "scuw/sc_waveform.hpp"
#include "scuw/types.hpp"
#include "scuw/uw_waveform.hpp"

namespace scuw {

enum class TxKind { sc, uw, uww };
/// uww2 is the two-stage (phase, combine, amplitude) receiver over the
/// extended window support.
enum class RxKind { sc, uw, uww2 };

TxKind parse_tx_kind(const std::string& s);
RxKind parse_rx_kind(const std::string& s);
std::string to_string(TxKind k);
std::string to_string(RxKind k);

struct ChannelSpec {
  enum class Kind { awgn, tdl, fixed };
  Kind kind = Kind::awgn;
  std::size_t memory = 10;       ///< TDL memory L (L + 1 taps)
  double decay_db_per_tap = 1.0; ///< TDL power decay
  ComplexVector taps;            ///< used as given when kind == fixed
};

struct LinkScenario {
  TxKind tx = TxKind::sc;
  RxKind rx = RxKind::sc;
  Numerology numerology = default_numerology();
  Modulation modulation = Modulation::qpsk;
  ChannelSpec channel;
  double snr_db = 20.0;
  std::uint64_t seed = 1;
  std::uint64_t trial = 0;
  std::size_t n_blocks = 8;
  double rolloff = 0.2;
  std::size_t extension_bins = 51;
  std::size_t n_cp = 0;        ///< 0 selects default_cp_length
  bool noiseless = false;
  bool unbiased = true;        ///< divide estimates by the mean signal gain before decisions
  UniqueWord unique_word = default_unique_word();
};

struct LinkResult {
  Bits tx_bits;
  Bits rx_bits;
  std::vector<ComplexVector> tx_data;    ///< per block
  std::vector<ComplexVector> estimates;  ///< per block, data part after scaling
  std::size_t bit_errors = 0;
  double evm_db = 0.0;
  double noise_var = 0.0;
  double signal_power = 0.0;  ///< measured received power per sample before noise
  ChannelRealization channel;
};

/// Everything about a scenario that does not change from trial to trial
/// (filters, eigenvalues, window, unique word), built once.
class LinkSimulator {
 public:
  explicit LinkSimulator(LinkScenario scenario);

  /// One packet. Data, channel and noise come from sub-streams of
  /// (seed, trial) that do not depend on tx/rx kind or SNR, so pairings and
  /// SNR points see common random numbers.
  LinkResult run(double snr_db, std::uint64_t trial) const;

  /// The transmitted packet of a trial, before the channel. `origin` receives
  /// the sample index where the first block's N-sample window starts.
  SamplePacket transmit_packet(std::uint64_t trial, std::size_t* origin = nullptr) const;

  const LinkScenario& scenario() const { return scenario_; }
  /// Noise variance per complex sample for a given SNR: (M / N) / snr.
  double noise_var_for(double snr_db) const;

  const PulseShape& tx_filter() const { return f_; }
  const PulseShape& rx_filter() const { return g_; }
  const FrequencyWindow& window() const { return window_; }

 private:
  ComplexVector transmit(const std::vector<ComplexVector>& data, std::size_t& origin) const;
  void draw_data(std::uint64_t trial, Bits& bits, std::vector<ComplexVector>& symbols) const;
  ComplexVector tx_weights(long begin, std::size_t width) const;

  LinkScenario scenario_;
  Constellation constellation_;
  PulseShape f_;
  PulseShape g_;
  DiagonalOperator lambda_;
  DiagonalOperator upsilon_;
  FrequencyWindow window_;
  SubcarrierMap map_;
  std::size_t n_cp_ = 0;
};

/// LinkSimulator(s).run(s.snr_db, s.trial).
LinkResult run_link(const LinkScenario& s);

/// Draws the channel for a trial exactly as run() does.
ChannelRealization draw_channel(const ChannelSpec& spec, std::uint64_t seed, std::uint64_t trial);

}  // namespace scuw
