#include "scuw/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scuw {
namespace {

constexpr double kPi = std::numbers::pi;

// Continuous-time RRC impulse response, t in symbol periods.
double rrc_at(double t, double rho) {
  if (std::abs(t) < 1e-12) return 1.0 - rho + 4.0 * rho / kPi;
  if (rho > 0.0 && std::abs(std::abs(4.0 * rho * t) - 1.0) < 1e-9) {
    const double arg = kPi / (4.0 * rho);
    return rho / std::sqrt(2.0) *
           ((1.0 + 2.0 / kPi) * std::sin(arg) + (1.0 - 2.0 / kPi) * std::cos(arg));
  }
  const double num = std::sin(kPi * t * (1.0 - rho)) + 4.0 * rho * t * std::cos(kPi * t * (1.0 + rho));
  const double den = kPi * t * (1.0 - (4.0 * rho * t) * (4.0 * rho * t));
  return num / den;
}

}  // namespace

PulseShape design_rrc(std::size_t num_taps, double rolloff, std::size_t samples_per_symbol) {
  if (num_taps == 0 || num_taps % 2 == 0) {
    throw std::invalid_argument("design_rrc: number of taps must be odd");
  }
  if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
    throw std::invalid_argument("design_rrc: rolloff must lie in [0, 1]");
  }
  if (samples_per_symbol == 0) {
    throw std::invalid_argument("design_rrc: samples_per_symbol must be >= 1");
  }
  const std::size_t center = (num_taps - 1) / 2;
  std::vector<double> taps(num_taps);
  // Evaluate one half and mirror so the symmetry is exact.
  for (std::size_t k = 0; k <= center; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(center)) /
                     static_cast<double>(samples_per_symbol);
    taps[k] = rrc_at(t, rolloff);
    taps[num_taps - 1 - k] = taps[k];
  }
  double energy = 0.0;
  for (double v : taps) energy += v * v;
  const double scale = 1.0 / std::sqrt(energy);

  PulseShape out;
  out.rolloff = rolloff;
  out.samples_per_symbol = samples_per_symbol;
  out.taps.resize(num_taps);
  for (std::size_t k = 0; k < num_taps; ++k) out.taps[k] = taps[k] * scale;
  return out;
}

PulseShape matched_filter(const PulseShape& f) {
  PulseShape g = f;
  std::reverse(g.taps.begin(), g.taps.end());
  for (auto& v : g.taps) v = std::conj(v);
  return g;
}

double FrequencyWindow::gain_at(long kappa) const {
  const long n_bins = static_cast<long>(gains.size());
  return gains[static_cast<std::size_t>(((kappa % n_bins) + n_bins) % n_bins)];
}

FrequencyWindow design_fd_window(std::size_t m, std::size_t n, std::size_t extension_bins,
                                 double rolloff) {
  if (m == 0 || n == 0) throw std::invalid_argument("design_fd_window: empty band");
  if (m + 2 * extension_bins > n) {
    throw std::invalid_argument("design_fd_window: window support exceeds the DFT size");
  }
  if (2 * extension_bins > m) {
    throw std::invalid_argument("design_fd_window: transition wider than the band");
  }
  if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
    throw std::invalid_argument("design_fd_window: rolloff must lie in [0, 1]");
  }

  FrequencyWindow w;
  w.gains.assign(n, 0.0);
  w.m = m;
  w.extension_bins = extension_bins;
  w.support_width = m + 2 * extension_bins;
  w.first_freq = -static_cast<long>(m / 2);
  w.rolloff = rolloff;

  const long ext = static_cast<long>(extension_bins);
  const long lo = w.first_freq;
  const long hi = lo + static_cast<long>(m);
  const long n_bins = static_cast<long>(n);
  auto bin = [n_bins](long kappa) { return static_cast<std::size_t>(((kappa % n_bins) + n_bins) % n_bins); };

  for (long kappa = lo - ext; kappa < hi + ext; ++kappa) {
    double g = 1.0;
    if (ext > 0 && kappa < lo + ext) {
      const double p = (static_cast<double>(kappa - lo + ext) + 0.5) / static_cast<double>(2 * ext);
      g = std::sin(0.5 * kPi * p);
    } else if (ext > 0 && kappa >= hi - ext) {
      const double p = (static_cast<double>(kappa - hi + ext) + 0.5) / static_cast<double>(2 * ext);
      g = std::cos(0.5 * kPi * p);
    }
    w.gains[bin(kappa)] = g;
  }
  return w;
}

}  // namespace scuw
