#include "scuw/link.hpp"

#include <cmath>
#include <stdexcept>

#include "scuw/channel.hpp"
#include "scuw/multirate.hpp"
#include "scuw/rng.hpp"

namespace scuw {
namespace {

// Sub-stream ids.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kChannelStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

// Slice [start, start + len) of x with zeros outside.
ComplexVector slice_padded(const ComplexVector& x, long start, std::size_t len) {
  ComplexVector out(len);
  for (std::size_t k = 0; k < len; ++k) {
    const long idx = start + static_cast<long>(k);
    if (idx >= 0 && idx < static_cast<long>(x.size())) out[k] = x[static_cast<std::size_t>(idx)];
  }
  return out;
}

long wrap(long x, long m) { return ((x % m) + m) % m; }

}  // namespace

TxKind parse_tx_kind(const std::string& s) {
  if (s == "sc") return TxKind::sc;
  if (s == "uw") return TxKind::uw;
  if (s == "uww") return TxKind::uww;
  throw std::invalid_argument("unknown transmitter '" + s + "' (expected sc, uw or uww)");
}

RxKind parse_rx_kind(const std::string& s) {
  if (s == "sc") return RxKind::sc;
  if (s == "uw") return RxKind::uw;
  if (s == "uww2") return RxKind::uww2;
  throw std::invalid_argument("unknown receiver '" + s + "' (expected sc, uw or uww2)");
}

std::string to_string(TxKind k) {
  switch (k) {
    case TxKind::sc: return "sc";
    case TxKind::uw: return "uw";
    case TxKind::uww: return "uww";
  }
  return "?";
}

std::string to_string(RxKind k) {
  switch (k) {
    case RxKind::sc: return "sc";
    case RxKind::uw: return "uw";
    case RxKind::uww2: return "uww2";
  }
  return "?";
}

ChannelRealization draw_channel(const ChannelSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  switch (spec.kind) {
    case ChannelSpec::Kind::awgn:
      return ChannelRealization{};
    case ChannelSpec::Kind::fixed:
      if (spec.taps.empty()) throw std::invalid_argument("fixed channel without taps");
      return ChannelRealization{spec.taps};
    case ChannelSpec::Kind::tdl: {
      Engine engine = make_engine(seed, {trial, kChannelStream});
      return make_tdl_channel(spec.memory, spec.decay_db_per_tap, engine);
    }
  }
  return ChannelRealization{};
}

LinkSimulator::LinkSimulator(LinkScenario scenario) : scenario_(std::move(scenario)) {
  const Numerology& n = scenario_.numerology;
  require_valid_structure(n);
  if (scenario_.n_blocks == 0) throw std::invalid_argument("link: need at least one block");
  if (scenario_.unique_word.size() != n.m_s || scenario_.unique_word.m_h != n.m_h) {
    throw std::invalid_argument("link: unique word does not match the numerology");
  }
  constellation_ = make_constellation(scenario_.modulation);
  f_ = design_rrc(n.l_tx, scenario_.rolloff, n.a);
  g_ = matched_filter(f_);
  if (g_.length() != n.l_rx) g_ = matched_filter(design_rrc(n.l_rx, scenario_.rolloff, n.a));
  lambda_ = sc_tx_eigenvalues(f_, n);
  upsilon_ = sc_rx_eigenvalues(g_, n);
  map_ = centered_map(n);
  window_ = design_fd_window(n.m, n.n(), scenario_.extension_bins, scenario_.rolloff);
  n_cp_ = scenario_.n_cp == 0 ? default_cp_length(n) : scenario_.n_cp;
}

double LinkSimulator::noise_var_for(double snr_db) const {
  const Numerology& n = scenario_.numerology;
  const double signal = static_cast<double>(n.m) / static_cast<double>(n.n());
  return signal / std::pow(10.0, snr_db / 10.0);
}

ComplexVector LinkSimulator::transmit(const std::vector<ComplexVector>& data, std::size_t& origin) const {
  const Numerology& n = scenario_.numerology;
  const UniqueWord& uw = scenario_.unique_word;
  switch (scenario_.tx) {
    case TxKind::sc:
      origin = static_cast<std::size_t>(n.n_t);
      return sc_packet(data, uw, n, f_).samples;
    case TxKind::uw:
    case TxKind::uww: {
      std::vector<ComplexVector> symbols;
      symbols.reserve(data.size());
      for (const auto& d : data) {
        symbols.push_back(scenario_.tx == TxKind::uw ? uw_modulate_symbol(d, uw, map_)
                                                     : uw_w_modulate(d, uw, map_, window_));
      }
      origin = n_cp_;
      return uw_assemble_packet(symbols, n_cp_).samples;
    }
  }
  throw std::logic_error("unreachable transmitter kind");
}

// Composite transmit gain per logical frequency kappa in [begin, begin + width)
// as seen on the N-point grid.
ComplexVector LinkSimulator::tx_weights(long begin, std::size_t width) const {
  const Numerology& n = scenario_.numerology;
  ComplexVector w(width);
  const double inv_sqrt_a = 1.0 / std::sqrt(static_cast<double>(n.a));
  for (std::size_t j = 0; j < width; ++j) {
    const long kappa = begin + static_cast<long>(j);
    switch (scenario_.tx) {
      case TxKind::sc:
        w[j] = lambda_.gains[static_cast<std::size_t>(wrap(kappa, static_cast<long>(n.k())))] * inv_sqrt_a;
        break;
      case TxKind::uw:
        w[j] = (kappa >= map_.first_freq && kappa < map_.first_freq + static_cast<long>(n.m)) ? 1.0 : 0.0;
        break;
      case TxKind::uww:
        w[j] = window_.gain_at(kappa);
        break;
    }
  }
  return w;
}

void LinkSimulator::draw_data(std::uint64_t trial, Bits& bits,
                              std::vector<ComplexVector>& symbols) const {
  Engine data_engine = make_engine(scenario_.seed, {trial, kDataStream});
  std::uniform_int_distribution<int> coin(0, 1);
  const std::size_t bits_per_block = scenario_.numerology.m_d() * constellation_.bits_per_symbol();
  bits.resize(bits_per_block * scenario_.n_blocks);
  for (auto& b : bits) b = static_cast<std::uint8_t>(coin(data_engine));
  symbols.clear();
  for (std::size_t i = 0; i < scenario_.n_blocks; ++i) {
    std::span<const std::uint8_t> block(bits.data() + i * bits_per_block, bits_per_block);
    symbols.push_back(map_bits(block, constellation_));
  }
}

SamplePacket LinkSimulator::transmit_packet(std::uint64_t trial, std::size_t* origin) const {
  Bits bits;
  std::vector<ComplexVector> symbols;
  draw_data(trial, bits, symbols);
  std::size_t o = 0;
  SamplePacket p{transmit(symbols, o)};
  if (origin) *origin = o;
  return p;
}

LinkResult LinkSimulator::run(double snr_db, std::uint64_t trial) const {
  const Numerology& n = scenario_.numerology;
  const std::size_t nn = n.n();
  LinkResult res;

  draw_data(trial, res.tx_bits, res.tx_data);

  std::size_t origin = 0;
  const ComplexVector x = transmit(res.tx_data, origin);
  res.channel = draw_channel(scenario_.channel, scenario_.seed, trial);
  ComplexVector y = linear_convolve(x, res.channel.taps);

  double power = 0.0;
  const std::size_t payload = std::min(nn * scenario_.n_blocks, y.size() - std::min(y.size(), origin));
  for (std::size_t k = 0; k < payload; ++k) power += std::norm(y[origin + k]);
  res.signal_power = payload ? power / static_cast<double>(payload) : 0.0;

  res.noise_var = scenario_.noiseless ? 0.0 : noise_var_for(snr_db);
  if (res.noise_var > 0.0) {
    Engine noise_engine = make_engine(scenario_.seed, {trial, kNoiseStream});
    add_awgn_inplace(y, res.noise_var, noise_engine);
  }

  const long origin_l = static_cast<long>(origin);
  switch (scenario_.rx) {
    case RxKind::sc: {
      const EqualizerGains eq = build_mmse_sc(res.channel, f_, g_, n, res.noise_var);
      const Complex beta = scenario_.unbiased ? eq.mean_signal_gain() : Complex{1.0};
      const long start0 = origin_l - n.n_t + static_cast<long>(n.n_g + n.o_rx());
      for (std::size_t i = 0; i < scenario_.n_blocks; ++i) {
        const ComplexVector core = slice_padded(y, start0 + static_cast<long>(i * nn), nn);
        SymbolEstimates est = sc_demodulate_epoch_dft(core, upsilon_, eq, n);
        for (auto& v : est.data) v /= beta;
        res.estimates.push_back(std::move(est.data));
      }
      break;
    }
    case RxKind::uw: {
      const ComplexVector w = tx_weights(map_.first_freq, n.m);
      const EqualizerGains eq = build_mmse_uw(res.channel, map_, res.noise_var, w);
      const Complex beta = scenario_.unbiased ? eq.mean_signal_gain() : Complex{1.0};
      for (std::size_t i = 0; i < scenario_.n_blocks; ++i) {
        const ComplexVector sym = slice_padded(y, origin_l + static_cast<long>(i * nn), nn);
        SymbolEstimates est = uw_demodulate(sym, map_, eq, n);
        for (auto& v : est.data) v /= beta;
        res.estimates.push_back(std::move(est.data));
      }
      break;
    }
    case RxKind::uww2: {
      const long begin = window_.support_begin();
      const ComplexVector w = tx_weights(begin, window_.support_width);
      ComplexVector g = channel_frequency_response(res.channel, nn);
      ComplexVector composite(w.size());
      for (std::size_t j = 0; j < w.size(); ++j) {
        composite[j] = g[static_cast<std::size_t>(wrap(begin + static_cast<long>(j), static_cast<long>(nn)))] * w[j];
      }
      const double beta = scenario_.unbiased
                              ? two_stage_signal_gain(composite, begin, n.m, res.noise_var)
                              : 1.0;
      for (std::size_t i = 0; i < scenario_.n_blocks; ++i) {
        const ComplexVector sym = slice_padded(y, origin_l + static_cast<long>(i * nn), nn);
        SymbolEstimates est = uw_demodulate_two_stage(sym, res.channel, begin, w, res.noise_var, n);
        if (beta > 0.0) {
          for (auto& v : est.data) v /= beta;
        }
        res.estimates.push_back(std::move(est.data));
      }
      break;
    }
  }

  double err_energy = 0.0, ref_energy = 0.0;
  res.rx_bits.reserve(res.tx_bits.size());
  for (std::size_t i = 0; i < scenario_.n_blocks; ++i) {
    const Bits decided = demap_hard(res.estimates[i], constellation_);
    res.rx_bits.insert(res.rx_bits.end(), decided.begin(), decided.end());
    for (std::size_t k = 0; k < res.tx_data[i].size(); ++k) {
      err_energy += std::norm(res.estimates[i][k] - res.tx_data[i][k]);
      ref_energy += std::norm(res.tx_data[i][k]);
    }
  }
  for (std::size_t k = 0; k < res.tx_bits.size(); ++k) res.bit_errors += res.tx_bits[k] != res.rx_bits[k];
  res.evm_db = err_energy > 0.0 ? 10.0 * std::log10(err_energy / ref_energy) : -300.0;
  return res;
}

LinkResult run_link(const LinkScenario& s) { return LinkSimulator(s).run(s.snr_db, s.trial); }

}  // namespace scuw
