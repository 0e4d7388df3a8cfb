#include <doctest.h>

#include "scuw/channel.hpp"
#include "scuw/metrics.hpp"
#include "scuw/multirate.hpp"
#include "scuw/uw_waveform.hpp"
#include "support.hpp"

using namespace scuw;
using testing::random_complex;
using testing::random_qpsk;
using testing::rel_error;

TEST_CASE("subcarrier map is centred and alias-consistent") {
  const SubcarrierMap map = centered_map(512, 768);
  CHECK(map.first_freq == -256);
  CHECK(map.start_bin() == 512);
  CHECK(map.bin(-1) == 767);
  CHECK(map.bin(0) == 0);
  CHECK(map.spread_index(-256) == 256);
  CHECK(map.spread_index(-256 + 512) == map.spread_index(-256));
}

TEST_CASE("uw symbol against an explicit spread-and-map construction") {
  Engine e = make_engine(21);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const ComplexVector d = random_qpsk(448, e);
  const ComplexVector v = spreader_input(d, uw);
  const ComplexVector spread = testing::naive_dft(v);
  ComplexVector y(768);
  for (long kappa = -256; kappa < 256; ++kappa) {
    y[static_cast<std::size_t>((kappa + 768) % 768)] = spread[static_cast<std::size_t>((kappa + 512) % 512)];
  }
  CHECK(rel_error(uw_modulate_symbol(d, uw, map), testing::naive_dft(y, +1)) < 1e-12);
}

TEST_CASE("uw perfect reconstruction on the identity channel") {
  Engine e = make_engine(22);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const ComplexVector d = random_qpsk(448, e);
  const EqualizerGains eq = build_mmse_uw(ChannelRealization{}, map, 0.0);
  const SymbolEstimates s = uw_demodulate(uw_modulate_symbol(d, uw, map), map, eq, n);
  CHECK(rel_error(s.data, d) < 1e-13);
  CHECK(rel_error(s.tail, ComplexVector(uw.tail().begin(), uw.tail().end())) < 1e-13);
}

TEST_CASE("window with zero extension reproduces the plain symbol") {
  Engine e = make_engine(23);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const ComplexVector d = random_qpsk(448, e);
  const FrequencyWindow rect = design_fd_window(512, 768, 0, 0.0);
  CHECK(rel_error(uw_w_modulate(d, uw, map, rect), uw_modulate_symbol(d, uw, map)) < 1e-13);
  const FrequencyWindow bad = design_fd_window(256, 768, 10, 0.2);
  CHECK_THROWS(uw_w_modulate(d, uw, map, bad));
}

TEST_CASE("symbol tail is nearly the fixed word") {
  Engine e = make_engine(24);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const std::size_t cp = default_cp_length(n);
  CHECK(cp == 82);
  double err = 0.0, ref = 0.0;
  for (int t = 0; t < 50; ++t) {
    const ComplexVector x1 = uw_modulate_symbol(random_qpsk(448, e), uw, map);
    const ComplexVector x2 = uw_modulate_symbol(random_qpsk(448, e), uw, map);
    for (std::size_t k = 768 - cp; k < 768; ++k) {
      err += std::norm(x1[k] - x2[k]) / 2.0;
      ref += std::norm(x1[k]);
    }
  }
  // Regression pin: the tails agree to about -20 dB for this word.
  CHECK(10 * std::log10(err / ref) == doctest::Approx(-19.7).epsilon(0.1));
}

TEST_CASE("packet assembly prepends a prefix once") {
  const ComplexVector a{{1, 0}, {2, 0}, {3, 0}}, b{{4, 0}, {5, 0}, {6, 0}};
  const SamplePacket p = uw_assemble_packet({a, b}, 2);
  CHECK(p.samples == ComplexVector{{2, 0}, {3, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}});
}

TEST_CASE("channel frequency response is the scaled dft") {
  Engine e = make_engine(25);
  const ChannelRealization h{random_complex(5, e)};
  const ComplexVector hf = channel_frequency_response(h, 12);
  const ComplexVector ref = testing::naive_dft(zero_pad(h.taps, 12));
  for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(hf[k] - std::sqrt(12.0) * ref[k]) < 1e-12);
}

TEST_CASE("two-stage on a flat channel equals single-stage mmse") {
  Engine e = make_engine(26);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const ChannelRealization h{{std::polar(0.7, 0.3)}};
  const double nv = 0.1;
  const ComplexVector d = random_qpsk(448, e);

  const ComplexVector x = linear_convolve(uw_modulate_symbol(d, uw, map), h.taps);
  const SymbolEstimates single = uw_demodulate(x, map, build_mmse_uw(h, map, nv), n);
  const ComplexVector ones(512, 1.0);
  const SymbolEstimates two = uw_demodulate_two_stage(x, h, -256, ones, nv, n);
  CHECK(rel_error(two.data, single.data) < 1e-12);

  // The windowed symbol combined over its support lands on the same estimate.
  const FrequencyWindow w = design_fd_window(512, 768, 51, 0.2);
  const ComplexVector xw = linear_convolve(uw_w_modulate(d, uw, map, w), h.taps);
  ComplexVector ww(w.support_width);
  for (std::size_t j = 0; j < ww.size(); ++j) ww[j] = w.gain_at(w.support_begin() + static_cast<long>(j));
  const SymbolEstimates tw = uw_demodulate_two_stage(xw, h, w.support_begin(), ww, nv, n);
  CHECK(rel_error(tw.data, single.data) < 1e-12);
}

TEST_CASE("two-stage combining is never worse than the best alias") {
  const FrequencyWindow w = design_fd_window(512, 768, 51, 0.2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelRealization h = make_tdl_channel(10, 1.0, seed);
    const ComplexVector hf = channel_frequency_response(h, 768);
    ComplexVector g(w.support_width);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const long kappa = w.support_begin() + static_cast<long>(j);
      g[j] = hf[static_cast<std::size_t>((kappa + 768) % 768)] * w.gain_at(kappa);
    }
    const auto combined = two_stage_bin_snr(g, w.support_begin(), 512, 0.01);
    const auto best = best_alias_bin_snr(g, w.support_begin(), 512, 0.01);
    for (std::size_t i = 0; i < 512; ++i) CHECK(combined[i] >= best[i]);
    const double beta = two_stage_signal_gain(g, w.support_begin(), 512, 0.01);
    CHECK(beta > 0.0);
    CHECK(beta < 1.0);
  }
}

TEST_CASE("two_stage_equalize and two_stage_combine agree") {
  Engine e = make_engine(27);
  const Numerology n = default_numerology();
  const SubcarrierMap map = centered_map(n);
  const FrequencyWindow w = design_fd_window(512, 768, 51, 0.2);
  const ComplexVector r = random_complex(w.support_width, e), hf = random_complex(w.support_width, e);
  ComplexVector g(w.support_width);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = hf[j] * w.gain_at(w.support_begin() + static_cast<long>(j));
  CHECK(rel_error(two_stage_equalize(r, hf, w, map, 0.05), two_stage_combine(r, g, w.support_begin(), 512, 0.05)) < 1e-14);
  CHECK_THROWS(two_stage_combine(r, g, 0, 512, -1.0));
}
