#include "scuw/sc_waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scuw/multirate.hpp"

namespace scuw {
namespace {

long as_long(std::size_t v) { return static_cast<long>(v); }

long floor_mod(long x, long m) { return ((x % m) + m) % m; }

// Peak position of the receive cascade after the tau0 shift, modulo a.
long decimation_phase(const Numerology& n, long n_g) {
  const long lead = as_long(n.a * n.m_t()) + (as_long(n.l_tx) - as_long(n.l_rx)) / 2 - as_long(n.b) * n_g;
  return floor_mod(lead, as_long(n.a));
}

long tau0(const Numerology& n) {
  return as_long(n.a * n.m_t()) - as_long(n.b * n.n_g) - as_long(n.l_rx) + 1;
}

long tau1(const Numerology& n) { return as_long(n.a * n.m_t()) - as_long(n.b) * n.n_t; }

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                ", got " + std::to_string(got));
  }
}

}  // namespace

Numerology default_numerology() {
  Numerology n;
  n.n_t = aligned_tx_offset(n);
  n.n_g = default_guard(n, 10);
  return n;
}

ValidationReport validate_numerology(const Numerology& n, std::size_t channel_memory) {
  ValidationReport r;
  auto structural = [&r](bool cond, const std::string& msg) {
    if (!cond) {
      r.structure_ok = false;
      r.failures.push_back(msg);
    }
  };
  structural(n.m > 0 && n.a > 0 && n.b > 0, "M, a and b must be positive");
  structural(n.m_h <= n.m_s && n.m_s <= n.m, "need M_h <= M_s <= M");
  structural(n.b <= n.a, "down-sampling factor b exceeds up-sampling factor a");
  structural(n.l_tx % 2 == 1 && n.l_rx % 2 == 1, "filter lengths must be odd");
  if (!r.structure_ok) return r;
  structural((n.a * n.m) % n.b == 0, "b must divide a*M (N = aM/b integral)");
  structural((n.l_tx - 1) % n.b == 0, "b must divide L_tx - 1 (O_tx integral)");
  structural((n.l_rx - 1) % n.b == 0, "b must divide L_rx - 1 (O_rx integral)");
  if ((n.a * n.m_s) % n.b != 0) r.notes.push_back("a*M_s/b is not integral; guard bound uses its floor");

  const long L = as_long(channel_memory);
  r.guard_min = as_long(n.o_tx()) + L;
  r.guard_max = as_long(n.a * n.m_s / n.b) - as_long(n.o_rx());
  const long ng = as_long(n.n_g);
  if (ng < r.guard_min || ng > r.guard_max) {
    r.guard_ok = false;
    r.failures.push_back("guard: need " + std::to_string(r.guard_min) + " <= N_g <= " +
                         std::to_string(r.guard_max) + ", N_g = " + std::to_string(ng));
  }
  if (r.guard_min > r.guard_max) {
    r.failures.push_back("guard: admissible N_g interval [" + std::to_string(r.guard_min) + ", " +
                         std::to_string(r.guard_max) + "] is empty");
  }
  r.isi_lhs = as_long(n.m_s * n.a);
  r.isi_rhs = as_long(n.l_tx + n.l_rx) + (L * as_long(n.b) + 1) - 3;
  if (r.isi_lhs < r.isi_rhs) {
    r.isi_ok = false;
    r.failures.push_back("isi: a*M_s = " + std::to_string(r.isi_lhs) +
                         " < L_tx + L_rx + L*b - 2 = " + std::to_string(r.isi_rhs));
  }
  if (decimation_phase(n, ng) != 0) {
    r.phase_aligned = false;
    r.notes.push_back("N_g = " + std::to_string(ng) +
                      " puts the receiver decimation off the pulse peak (phase " +
                      std::to_string(decimation_phase(n, ng)) + " of " + std::to_string(n.a) + ")");
  }
  return r;
}

std::size_t default_guard(const Numerology& n, std::size_t channel_memory) {
  require_valid_structure(n);
  const long lo = as_long(n.o_tx() + channel_memory);
  const long hi = as_long(n.a * n.m_s / n.b) - as_long(n.o_rx());
  if (lo > hi) {
    throw std::invalid_argument("default_guard: no admissible N_g for channel memory " +
                                std::to_string(channel_memory));
  }
  const double mid = 0.5 * static_cast<double>(lo + hi);
  long best = -1;
  double best_dist = 0.0;
  for (long ng = lo; ng <= hi; ++ng) {
    if (decimation_phase(n, ng) != 0) continue;
    const double dist = std::abs(static_cast<double>(ng) - mid);
    if (best < 0 || dist < best_dist) {
      best = ng;
      best_dist = dist;
    }
  }
  if (best < 0) best = (lo + hi) / 2;
  return static_cast<std::size_t>(best);
}

long aligned_tx_offset(const Numerology& n) {
  if (n.l_tx % 2 == 0) throw std::domain_error("aligned_tx_offset: L_tx must be odd");
  const long num = as_long(n.a) * (as_long(n.m_s) - as_long(n.m_h)) + (as_long(n.l_tx) - 1) / 2;
  if (num % as_long(n.b) != 0) {
    throw std::domain_error("aligned_tx_offset: offset " + std::to_string(num) + "/" +
                            std::to_string(n.b) + " is not an integer");
  }
  return num / as_long(n.b);
}

void require_valid_structure(const Numerology& n) {
  ValidationReport r = validate_numerology(n, 0);
  if (!r.structure_ok) throw std::invalid_argument("numerology: " + r.failures.front());
}

ComplexVector sc_block_symbols(std::span<const Complex> data, const UniqueWord& uw) {
  ComplexVector v(uw.symbols.begin(), uw.symbols.end());
  v.insert(v.end(), data.begin(), data.end());
  return v;
}

ComplexVector spreader_input(std::span<const Complex> data, const UniqueWord& uw) {
  ComplexVector v;
  v.reserve(uw.size() + data.size());
  v.insert(v.end(), uw.head().begin(), uw.head().end());
  v.insert(v.end(), data.begin(), data.end());
  v.insert(v.end(), uw.tail().begin(), uw.tail().end());
  return v;
}

SymbolEstimates split_estimates(std::span<const Complex> v, std::size_t m_h, std::size_t m_d) {
  if (v.size() < m_h + m_d) throw std::invalid_argument("split_estimates: vector too short");
  SymbolEstimates s;
  s.head.assign(v.begin(), v.begin() + static_cast<long>(m_h));
  s.data.assign(v.begin() + static_cast<long>(m_h), v.begin() + static_cast<long>(m_h + m_d));
  s.tail.assign(v.begin() + static_cast<long>(m_h + m_d), v.end());
  return s;
}

ComplexVector sc_modulate_block(std::span<const Complex> data, const UniqueWord& uw,
                                const Numerology& n, const PulseShape& f) {
  require_valid_structure(n);
  require_size(data.size(), n.m_d(), "sc_modulate_block data");
  require_size(uw.size(), n.m_s, "sc_modulate_block unique word");
  require_size(f.length(), n.l_tx, "sc_modulate_block filter");
  const ComplexVector shaped = linear_convolve(upsample_time(sc_block_symbols(data, uw), n.a), f.taps);
  ComplexVector x = downsample_time(shaped, n.b);
  const double gain = std::sqrt(static_cast<double>(n.b));
  for (auto& v : x) v *= gain;
  return x;
}

SamplePacket sc_assemble_packet(const std::vector<ComplexVector>& blocks, const UniqueWord& uw,
                                const Numerology& n, const PulseShape& f) {
  if (blocks.empty()) throw std::invalid_argument("sc_assemble_packet: no blocks");
  const std::size_t nn = n.n();
  const std::size_t t_tx = n.t_tx();
  const std::size_t trailer = n.trailer_length();
  SamplePacket p;
  p.samples.assign(nn * blocks.size() + std::max(trailer, t_tx - nn), Complex{});
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    require_size(blocks[i].size(), t_tx, "sc_assemble_packet block");
    for (std::size_t k = 0; k < t_tx; ++k) p.samples[i * nn + k] += blocks[i][k];
  }
  // The last epoch needs the known word that follows it.
  const ComplexVector zero_data(n.m_d());
  const ComplexVector uw_only = sc_modulate_block(zero_data, uw, n, f);
  const std::size_t base = nn * blocks.size();
  for (std::size_t k = 0; k < trailer; ++k) p.samples[base + k] += uw_only[k];
  return p;
}

SamplePacket sc_packet(const std::vector<ComplexVector>& data, const UniqueWord& uw,
                       const Numerology& n, const PulseShape& f) {
  std::vector<ComplexVector> blocks;
  blocks.reserve(data.size());
  for (const auto& d : data) blocks.push_back(sc_modulate_block(d, uw, n, f));
  return sc_assemble_packet(blocks, uw, n, f);
}

ComplexVector epoch_extract(std::span<const Complex> received, std::size_t i, const Numerology& n,
                            long origin) {
  const long start = origin + as_long(n.n_g) + as_long(i * n.n());
  const long len = as_long(n.n() + n.o_rx());
  if (start < 0 || start + len > as_long(received.size())) {
    throw std::out_of_range("epoch_extract: epoch " + std::to_string(i) + " [" +
                            std::to_string(start) + ", " + std::to_string(start + len) +
                            ") outside stream of " + std::to_string(received.size()) + " samples");
  }
  return ComplexVector(received.begin() + start, received.begin() + start + len);
}

ComplexVector effective_response(const ChannelRealization& h, const PulseShape& f,
                                 const PulseShape& g, std::size_t b) {
  if (h.taps.empty()) throw std::invalid_argument("effective_response: empty channel");
  const ComplexVector fg = linear_convolve(f.taps, g.taps);
  ComplexVector up = upsample_time(h.taps, b);
  up.resize(b * h.memory() + 1);
  return linear_convolve(fg, up);
}

namespace {

ComplexVector shifted_cascade(const ChannelRealization& h, const PulseShape& f, const PulseShape& g,
                              const Numerology& n) {
  require_valid_structure(n);
  const ComplexVector heff = effective_response(h, f, g, n.b);
  if (heff.size() > n.k()) {
    throw std::invalid_argument("build_mmse_sc: effective response of " +
                                std::to_string(heff.size()) + " taps exceeds aM = " +
                                std::to_string(n.k()));
  }
  return circ_shift(zero_pad(heff, n.k()), tau0(n));
}

}  // namespace

EqualizerGains build_mmse_sc(const ChannelRealization& h, const PulseShape& f,
                             const PulseShape& g, const Numerology& n, double noise_var) {
  const ComplexVector c = shifted_cascade(h, f, g, n);
  ComplexVector q = dft(downsample_time(c, n.a));
  const double scale = std::sqrt(static_cast<double>(n.m));
  for (auto& v : q) v *= scale;
  return mmse_gains(std::move(q), noise_var);
}

std::vector<ComplexVector> sc_alias_response(const ChannelRealization& h, const PulseShape& f,
                                             const PulseShape& g, const Numerology& n) {
  const ComplexVector c = shifted_cascade(h, f, g, n);
  const ComplexVector spec = dft(c);
  const double scale = std::sqrt(static_cast<double>(n.k())) / static_cast<double>(n.a);
  std::vector<ComplexVector> out(n.a, ComplexVector(n.m));
  for (std::size_t p = 0; p < n.a; ++p) {
    for (std::size_t k = 0; k < n.m; ++k) out[p][k] = spec[p * n.m + k] * scale;
  }
  return out;
}

double max_alias_phase_spread(const std::vector<ComplexVector>& aliases, double rel_floor) {
  if (aliases.empty()) return 0.0;
  double peak = 0.0;
  for (const auto& al : aliases) {
    for (const auto& v : al) peak = std::max(peak, std::abs(v));
  }
  const double floor = rel_floor * peak;
  double spread = 0.0;
  const std::size_t bins = aliases.front().size();
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::size_t p = 0; p < aliases.size(); ++p) {
      if (std::abs(aliases[p][k]) < floor) continue;
      for (std::size_t q = p + 1; q < aliases.size(); ++q) {
        if (std::abs(aliases[q][k]) < floor) continue;
        const double d = std::abs(std::arg(aliases[p][k] * std::conj(aliases[q][k])));
        spread = std::max(spread, d);
      }
    }
  }
  return spread;
}

SymbolEstimates sc_demodulate_epoch(std::span<const Complex> epoch, const PulseShape& g,
                                    const Numerology& n, const EqualizerGains& eq) {
  require_valid_structure(n);
  require_size(epoch.size(), n.n() + n.o_rx(), "sc_demodulate_epoch epoch");
  require_size(g.length(), n.l_rx, "sc_demodulate_epoch filter");
  require_size(eq.size(), n.m, "sc_demodulate_epoch equalizer");
  const auto core = epoch.subspan(n.o_rx());
  const ComplexVector filtered = circular_convolve(upsample_time(core, n.b), g.taps);
  ComplexVector y = downsample_time(filtered, n.a);
  const double gain = std::sqrt(static_cast<double>(n.b));
  for (auto& v : y) v *= gain;
  ComplexVector spec = dft(y);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= eq.gains[k];
  return split_estimates(idft(spec), n.m_h, n.m_d());
}

DiagonalOperator sc_tx_eigenvalues(const PulseShape& f, const Numerology& n) {
  require_valid_structure(n);
  require_size(f.length(), n.l_tx, "sc_tx_eigenvalues filter");
  return circulant_eigenvalues(circ_shift(zero_pad(f.taps, n.k()), tau1(n)), n.k());
}

DiagonalOperator sc_rx_eigenvalues(const PulseShape& g, const Numerology& n) {
  require_valid_structure(n);
  require_size(g.length(), n.l_rx, "sc_rx_eigenvalues filter");
  return circulant_eigenvalues(g.taps, n.k());
}

ComplexVector sc_modulate_block_dft(std::span<const Complex> data, const UniqueWord& uw,
                                    const Numerology& n, const DiagonalOperator& lambda) {
  require_valid_structure(n);
  require_size(data.size(), n.m_d(), "sc_modulate_block_dft data");
  require_size(uw.size(), n.m_s, "sc_modulate_block_dft unique word");
  require_size(lambda.size(), n.k(), "sc_modulate_block_dft eigenvalues");
  ComplexVector spec = tile_bins(dft(spreader_input(data, uw)), n.a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n.a));
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= lambda.gains[k] * scale;
  return idft(fold_bins(spec, n.b));
}

std::vector<ComplexVector> sc_receiver_aliases(std::span<const Complex> core,
                                               const DiagonalOperator& upsilon, const Numerology& n) {
  require_valid_structure(n);
  require_size(core.size(), n.n(), "sc_receiver_aliases core");
  require_size(upsilon.size(), n.k(), "sc_receiver_aliases eigenvalues");
  const ComplexVector spec = tile_bins(dft(core), n.b);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n.a));
  std::vector<ComplexVector> out(n.a, ComplexVector(n.m));
  for (std::size_t p = 0; p < n.a; ++p) {
    for (std::size_t k = 0; k < n.m; ++k) {
      const std::size_t bin = p * n.m + k;
      out[p][k] = spec[bin] * upsilon.gains[bin] * scale;
    }
  }
  return out;
}

SymbolEstimates sc_demodulate_epoch_dft(std::span<const Complex> core,
                                        const DiagonalOperator& upsilon, const EqualizerGains& eq,
                                        const Numerology& n) {
  require_size(eq.size(), n.m, "sc_demodulate_epoch_dft equalizer");
  const auto aliases = sc_receiver_aliases(core, upsilon, n);
  ComplexVector combined(n.m);
  for (const auto& al : aliases) {
    for (std::size_t k = 0; k < n.m; ++k) combined[k] += al[k];
  }
  for (std::size_t k = 0; k < n.m; ++k) combined[k] *= eq.gains[k];
  return split_estimates(idft(combined), n.m_h, n.m_d());
}

}  // namespace scuw
