#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scuw/link.hpp"
#include "scuw/modem.hpp"
#include "scuw/types.hpp"

namespace scuw {

/// Floor reported by the dB metrics when the error is exactly zero.
inline constexpr double kDbFloor = -300.0;

/// Peak-to-mean power of one block after oversampling by zero-padding its
/// spectrum (oversample = 1 uses the samples as they are). Throws on an
/// empty or all-zero block.
double papr_db(std::span<const Complex> block, std::size_t oversample = 4);

/// PAPR of consecutive block_len-sample blocks starting at `offset`.
std::vector<double> block_papr_db(std::span<const Complex> samples, std::size_t block_len,
                                  std::size_t oversample = 4, std::size_t offset = 0);

struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> probabilities;  ///< P(PAPR > threshold)
};

/// Empirical CCDF of `values` evaluated at each observed value (sorted
/// ascending) plus 0 dB.
CcdfCurve ccdf_from_values(std::vector<double> values);

/// CCDF of the per-block PAPR of a packet. Throws if the packet is shorter
/// than one block.
CcdfCurve papr_ccdf(const SamplePacket& packet, std::size_t block_len, std::size_t oversample = 4);

/// Smallest observed value x with P(value > x) <= probability.
double value_at_ccdf(std::vector<double> values, double probability);

/// Fraction of differing bits. Throws on a length mismatch.
double ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx);

/// 10 log10(|x - y|^2 / |x|^2) over the overlap of x[offset + k] and y[k]
/// (negative offsets shift y instead). Returns kDbFloor when they agree
/// exactly; throws if there is no overlap.
double waveform_mse_db(std::span<const Complex> x, std::span<const Complex> y, long offset = 0);

/// 10 log10(|est - ref|^2 / |ref|^2).
double evm_db(std::span<const Complex> reference, std::span<const Complex> estimate);

double q_function(double x);
/// Uncoded Gray-mapped AWGN BER at a given Eb/N0 (linear).
double ber_bound(Modulation m, double ebn0);
/// Eb/N0 (linear) of a data symbol when the SNR per received sample is
/// snr_db and M symbols are spread over N samples.
double ebn0_from_snr(double snr_db, std::size_t m, std::size_t n, Modulation mod);
/// Inverse of ber_bound in terms of per-sample SNR in dB.
double snr_for_bound(Modulation mod, double target_ber, std::size_t m, std::size_t n);

struct SweepOptions {
  std::size_t min_errors = 100;
  std::uint64_t min_bits = 100000;
  std::uint64_t max_bits = 20000000;
  std::size_t min_trials = 1;
  std::size_t chunk_trials = 8;   ///< trials per stopping-rule check; fixes the result
  std::size_t threads = 0;        ///< 0: hardware concurrency
};

struct SweepPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::size_t trials = 0;
  double std_error = 0.0;   ///< binomial sqrt(p (1 - p) / bits)
  double upper_95 = 0.0;    ///< one-sided 95% upper bound on the BER
  double evm_db = 0.0;      ///< mean over trials
};

struct SweepResult {
  TxKind tx = TxKind::sc;
  RxKind rx = RxKind::sc;
  std::vector<SweepPoint> points;

  std::vector<double> snr_points_db() const;
  std::vector<double> ber_values() const;
};

/// Monte-Carlo BER per SNR. Each point runs trials 0, 1, 2, ... (common
/// random numbers across points and pairings) until it has at least
/// min_errors errors, min_bits bits and min_trials trials, or max_bits bits.
/// Trials run on a thread pool; the result does not depend on the thread count.
SweepResult ber_sweep(const LinkSimulator& sim, std::span<const double> snr_db,
                      const SweepOptions& opts = {});

/// SNR at which the BER curve crosses `target`, by linear interpolation of
/// log10(BER) over SNR. Returns NaN if the curve never brackets the target.
double snr_at_ber(const SweepResult& r, double target);

/// start:step:stop (inclusive, tolerant to rounding).
std::vector<double> snr_range(double start, double step, double stop);

}  // namespace scuw
