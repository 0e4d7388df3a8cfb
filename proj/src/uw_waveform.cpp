#include "scuw/uw_waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scuw/multirate.hpp"

namespace scuw {
namespace {

std::size_t wrap(long x, std::size_t m) {
  const long mm = static_cast<long>(m);
  return static_cast<std::size_t>(((x % mm) + mm) % mm);
}

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                ", got " + std::to_string(got));
  }
}

ComplexVector window_weights(const FrequencyWindow& w) {
  ComplexVector out(w.support_width);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = w.gain_at(w.support_begin() + static_cast<long>(j));
  return out;
}

}  // namespace

std::size_t SubcarrierMap::start_bin() const { return wrap(first_freq, n); }
std::size_t SubcarrierMap::bin(long kappa) const { return wrap(kappa, n); }
std::size_t SubcarrierMap::spread_index(long kappa) const { return wrap(kappa, m); }

SubcarrierMap centered_map(std::size_t m, std::size_t n) {
  if (m == 0 || m > n) throw std::invalid_argument("subcarrier map: need 0 < M <= N");
  return SubcarrierMap{n, m, -static_cast<long>(m / 2)};
}

SubcarrierMap centered_map(const Numerology& num) { return centered_map(num.m, num.n()); }

ComplexVector spread_and_map(std::span<const Complex> v, std::size_t n, long begin,
                             std::span<const Complex> weights) {
  if (weights.size() > n) throw std::invalid_argument("spread_and_map: support exceeds N");
  const ComplexVector spec = dft(v);
  ComplexVector y(n);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const long kappa = begin + static_cast<long>(j);
    y[wrap(kappa, n)] += weights[j] * spec[wrap(kappa, v.size())];
  }
  return idft(y);
}

ComplexVector uw_modulate_symbol(std::span<const Complex> data, const UniqueWord& uw,
                                 const SubcarrierMap& map) {
  require_size(uw.size() + data.size(), map.m, "uw_modulate_symbol block");
  const ComplexVector ones(map.m, Complex{1.0, 0.0});
  return spread_and_map(spreader_input(data, uw), map.n, map.first_freq, ones);
}

ComplexVector uw_w_modulate(std::span<const Complex> data, const UniqueWord& uw,
                            const SubcarrierMap& map, const FrequencyWindow& window) {
  require_size(uw.size() + data.size(), map.m, "uw_w_modulate block");
  if (window.n() != map.n || window.m != map.m || window.first_freq != map.first_freq) {
    throw std::invalid_argument("uw_w_modulate: window does not match the subcarrier map");
  }
  if (window.support_width > map.n) throw std::invalid_argument("uw_w_modulate: support exceeds N");
  return spread_and_map(spreader_input(data, uw), map.n, window.support_begin(), window_weights(window));
}

SamplePacket uw_assemble_packet(const std::vector<ComplexVector>& symbols, std::size_t n_cp) {
  if (symbols.empty()) throw std::invalid_argument("uw_assemble_packet: no symbols");
  const std::size_t n = symbols.front().size();
  if (n_cp > n) throw std::invalid_argument("uw_assemble_packet: prefix longer than a symbol");
  SamplePacket p;
  p.samples.reserve(n_cp + n * symbols.size());
  p.samples.insert(p.samples.end(), symbols.front().end() - static_cast<long>(n_cp), symbols.front().end());
  for (const auto& s : symbols) {
    require_size(s.size(), n, "uw_assemble_packet symbol");
    p.samples.insert(p.samples.end(), s.begin(), s.end());
  }
  return p;
}

std::size_t default_cp_length(const Numerology& n) {
  return std::min(n.m_t() * n.n() / n.m, n.n() / 8);
}

ComplexVector channel_frequency_response(const ChannelRealization& h, std::size_t n) {
  return circulant_eigenvalues(h.taps, n).gains;
}

EqualizerGains build_mmse_uw(const ChannelRealization& h, const SubcarrierMap& map,
                             double noise_var, std::span<const Complex> tx_weights) {
  if (h.taps.size() > map.n) throw std::invalid_argument("build_mmse_uw: channel longer than N");
  if (!tx_weights.empty()) require_size(tx_weights.size(), map.m, "build_mmse_uw weights");
  const ComplexVector hf = channel_frequency_response(h, map.n);
  ComplexVector q(map.m);
  for (std::size_t j = 0; j < map.m; ++j) {
    q[j] = hf[map.bin(map.first_freq + static_cast<long>(j))];
    if (!tx_weights.empty()) q[j] *= tx_weights[j];
  }
  return mmse_gains(std::move(q), noise_var);
}

SymbolEstimates uw_demodulate(std::span<const Complex> symbol, const SubcarrierMap& map,
                              const EqualizerGains& eq, const Numerology& n) {
  require_size(symbol.size(), map.n, "uw_demodulate symbol");
  require_size(eq.size(), map.m, "uw_demodulate equalizer");
  const ComplexVector r = dft(symbol);
  ComplexVector z(map.m);
  for (std::size_t j = 0; j < map.m; ++j) {
    const long kappa = map.first_freq + static_cast<long>(j);
    z[map.spread_index(kappa)] = eq.gains[j] * r[map.bin(kappa)];
  }
  return split_estimates(idft(z), n.m_h, n.m_d());
}

ComplexVector two_stage_combine(std::span<const Complex> received_bins,
                                std::span<const Complex> response, long begin, std::size_t m,
                                double noise_var) {
  require_size(received_bins.size(), response.size(), "two_stage_combine bins");
  if (noise_var < 0.0) throw std::invalid_argument("two_stage_combine: negative noise variance");
  ComplexVector acc(m);
  std::vector<double> power(m, 0.0);
  for (std::size_t j = 0; j < response.size(); ++j) {
    const double mag = std::abs(response[j]);
    if (mag == 0.0) continue;
    const std::size_t idx = wrap(begin + static_cast<long>(j), m);
    const Complex phase = std::conj(response[j]) / mag;
    acc[idx] += mag * phase * received_bins[j];
    power[idx] += mag * mag;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double den = power[i] + noise_var;
    acc[i] = den > 0.0 ? acc[i] / den : Complex{};
  }
  return acc;
}

ComplexVector two_stage_equalize(std::span<const Complex> received_bins,
                                 std::span<const Complex> channel_freq,
                                 const FrequencyWindow& window, const SubcarrierMap& map,
                                 double noise_var) {
  require_size(received_bins.size(), window.support_width, "two_stage_equalize bins");
  require_size(channel_freq.size(), window.support_width, "two_stage_equalize channel");
  ComplexVector g = window_weights(window);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] *= channel_freq[j];
  return two_stage_combine(received_bins, g, window.support_begin(), map.m, noise_var);
}

namespace {

std::vector<double> alias_power(std::span<const Complex> response, long begin, std::size_t m,
                                bool take_max) {
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < response.size(); ++j) {
    const std::size_t idx = wrap(begin + static_cast<long>(j), m);
    const double p = std::norm(response[j]);
    out[idx] = take_max ? std::max(out[idx], p) : out[idx] + p;
  }
  return out;
}

}  // namespace

std::vector<double> two_stage_bin_snr(std::span<const Complex> response, long begin,
                                      std::size_t m, double noise_var) {
  auto p = alias_power(response, begin, m, false);
  for (auto& v : p) v /= noise_var;
  return p;
}

std::vector<double> best_alias_bin_snr(std::span<const Complex> response, long begin,
                                       std::size_t m, double noise_var) {
  auto p = alias_power(response, begin, m, true);
  for (auto& v : p) v /= noise_var;
  return p;
}

double two_stage_signal_gain(std::span<const Complex> response, long begin, std::size_t m,
                             double noise_var) {
  const auto p = alias_power(response, begin, m, false);
  double acc = 0.0;
  for (double v : p) {
    const double den = v + noise_var;
    acc += den > 0.0 ? v / den : 0.0;
  }
  return acc / static_cast<double>(m);
}

SymbolEstimates uw_demodulate_two_stage(std::span<const Complex> symbol,
                                        const ChannelRealization& h, long begin,
                                        std::span<const Complex> tx_weights, double noise_var,
                                        const Numerology& n) {
  const std::size_t nn = n.n();
  require_size(symbol.size(), nn, "uw_demodulate_two_stage symbol");
  if (tx_weights.size() > nn) throw std::invalid_argument("uw_demodulate_two_stage: support exceeds N");
  const ComplexVector hf = channel_frequency_response(h, nn);
  const ComplexVector r = dft(symbol);
  ComplexVector bins(tx_weights.size()), g(tx_weights.size());
  for (std::size_t j = 0; j < tx_weights.size(); ++j) {
    const std::size_t bin = wrap(begin + static_cast<long>(j), nn);
    bins[j] = r[bin];
    g[j] = hf[bin] * tx_weights[j];
  }
  return split_estimates(idft(two_stage_combine(bins, g, begin, n.m, noise_var)), n.m_h, n.m_d());
}

}  // namespace scuw
