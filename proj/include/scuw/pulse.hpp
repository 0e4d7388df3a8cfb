#pragma once

#include <cstddef>
#include <vector>

#include "scuw/types.hpp"

namespace scuw {

/// Time-domain pulse (transmit filter f or receive filter g).
///
/// Taps have unit l2 energy and odd length; the group delay is (L - 1) / 2
/// samples at the up-sampled rate.
struct PulseShape {
  ComplexVector taps;
  double rolloff = 0.0;
  std::size_t samples_per_symbol = 1;

  std::size_t length() const { return taps.size(); }
};

/// Root-raised-cosine taps sampled at `samples_per_symbol` per symbol,
/// truncated symmetrically to `num_taps` and normalized to unit energy.
/// The singular points t = 0 and |t| = T / (4 rolloff) use their analytic
/// limits. Throws std::invalid_argument for even `num_taps`, a rolloff outside
/// [0, 1] or a zero sample rate.
PulseShape design_rrc(std::size_t num_taps, double rolloff, std::size_t samples_per_symbol);

/// conj(flip(f)); real symmetric designs are self-matched.
PulseShape matched_filter(const PulseShape& f);

/// Real frequency-domain window over the N DFT bins of a UW DFT-s-(W-)OFDM
/// symbol.
///
/// The band occupies logical frequencies [first_freq, first_freq + M). The
/// window extends `extension_bins` past either edge; over each 2*ext-bin
/// transition the gain follows a square-root raised cosine such that
/// gain(k)^2 + gain(k + M)^2 == 1, so the extended copies can be recombined
/// without loss. With extension 0 the window is rectangular.
struct FrequencyWindow {
  std::vector<double> gains;  ///< indexed by DFT bin, size N
  std::size_t m = 0;
  std::size_t extension_bins = 0;
  std::size_t support_width = 0;
  long first_freq = 0;  ///< logical frequency of the first band bin (DC-centred: -M/2)
  double rolloff = 0.0; ///< nominal, recorded only; the transition is 2*ext bins

  std::size_t n() const { return gains.size(); }
  /// Gain at logical frequency kappa (taken modulo N).
  double gain_at(long kappa) const;
  /// Lowest logical frequency of the support, first_freq - extension_bins.
  long support_begin() const { return first_freq - static_cast<long>(extension_bins); }
};

/// Builds the DC-centred window described above. Throws if the support
/// M + 2 ext exceeds N, if 2 ext > M, or if rolloff is outside [0, 1].
FrequencyWindow design_fd_window(std::size_t m, std::size_t n, std::size_t extension_bins,
                                 double rolloff);

}  // namespace scuw
