// Acceptance runner: one PASS/FAIL line per criterion, INFO lines for context.
// Exit status is non-zero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <unistd.h>

#include "scuw/channel.hpp"
#include "scuw/config.hpp"
#include "scuw/experiments.hpp"
#include "scuw/link.hpp"
#include "scuw/metrics.hpp"
#include "scuw/multirate.hpp"
#include "support.hpp"

using namespace scuw;
using testing::random_complex;
using testing::random_qpsk;
using testing::rel_error;

namespace {

int failures = 0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void verdict(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
  if (!ok) ++failures;
}

void info(const std::string& what) { std::cout << "  INFO " << what << std::endl; }

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() /
                 ("scuw_acceptance_" + std::to_string(::getpid())) / name;
  std::filesystem::create_directories(p);
  return p;
}

nlohmann::json experiment_summary(ExperimentConfig cfg, const std::string& dir) {
  cfg.out = scratch(dir).string();
  finalize_config(cfg);
  return run_experiment(cfg).summary;
}

SweepResult sweep(TxKind tx, RxKind rx, const ChannelSpec& ch, std::vector<double> snr,
                  const SweepOptions& o) {
  LinkScenario s;
  s.tx = tx;
  s.rx = rx;
  s.channel = ch;
  return ber_sweep(LinkSimulator(s), snr, o);
}

const SweepPoint& at(const SweepResult& r, double snr) {
  for (const auto& p : r.points) {
    if (std::abs(p.snr_db - snr) < 1e-9) return p;
  }
  throw std::logic_error("snr point missing");
}

void resampling() {
  Engine e = make_engine(101);
  double worst = 0.0;
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = 1; b <= 4; ++b) {
      for (std::size_t len : {4ul, 12ul, 512ul, 1536ul}) {
        for (int t = 0; t < 100; ++t) {
          const ComplexVector x = random_complex(len, e);
          worst = std::max(worst, rel_error(upsample_dft(x, a), upsample_time(x, a)));
          const ComplexVector y = random_complex(len * b, e);
          worst = std::max(worst, rel_error(downsample_dft(y, b), downsample_time(y, b)));
        }
      }
    }
  }
  verdict(1, worst <= 1e-10, "resampling DFT path vs time path, worst rel. error " + num(worst) + " (<= 1e-10)");
}

void sc_dual_path() {
  Engine e = make_engine(102);
  const UniqueWord uw = default_unique_word();
  double worst_tx = 0.0, worst_rx = 0.0, aligned = 0.0;
  for (double rho : {0.0, 0.2, 0.3}) {
    const PulseShape f = design_rrc(67, rho, 3), g = matched_filter(f);
    for (long nt : {33L, 64L, 95L, 99L}) {
      Numerology n = default_numerology();
      n.n_t = nt;
      const DiagonalOperator lam = sc_tx_eigenvalues(f, n);
      const DiagonalOperator ups = sc_rx_eigenvalues(g, n);
      const EqualizerGains eq = build_mmse_sc(make_tdl_channel(10, 1.0, 5), f, g, n, 0.01);
      for (int pkt = 0; pkt < 20; ++pkt) {
        std::vector<ComplexVector> data{random_qpsk(448, e), random_qpsk(448, e), random_qpsk(448, e)};
        const SamplePacket p = sc_packet(data, uw, n, f);
        for (std::size_t i = 0; i < 3; ++i) {
          const auto start = p.samples.begin() + nt + static_cast<long>(i * 768);
          const double err = rel_error(sc_modulate_block_dft(data[i], uw, n, lam), ComplexVector(start, start + 768));
          (nt == 99 ? aligned : worst_tx) = std::max(nt == 99 ? aligned : worst_tx, err);
        }
        if (nt != 99) {
          const ComplexVector epoch = epoch_extract(p.samples, 1, n, 0);
          const ComplexVector core(epoch.end() - 768, epoch.end());
          worst_rx = std::max(worst_rx, rel_error(sc_demodulate_epoch_dft(core, ups, eq, n).data,
                                                  sc_demodulate_epoch(epoch, g, n, eq).data));
        }
      }
    }
  }
  verdict(2, worst_tx <= 1e-9 && worst_rx <= 1e-9,
          "SC DFT epochs vs packet slices, rolloff {0, 0.2, 0.3}, N_t {33, 64, 95}, 20 packets: tx " +
              num(worst_tx) + ", rx " + num(worst_rx) + " (<= 1e-9)");
  info("at the alignment offset N_t = 99 the slice also carries the next block's first data symbols: rel. error " +
       num(aligned));
}

void waveform_mse() {
  const nlohmann::json s = experiment_summary(default_config("waveform-mse"), "mse");
  const double mse = s["mse_db_sc_vs_uw"].get<double>();
  double imag = 0.0;
  for (double rho : {0.0, 0.2, 0.3}) {
    for (auto v : sc_tx_eigenvalues(design_rrc(67, rho, 3), default_numerology()).gains) {
      imag = std::max(imag, std::abs(v.imag()));
    }
  }
  verdict(3, std::abs(mse + 21.0) <= 2.0 && imag <= 1e-9,
          "SC (rolloff 0) vs UW waveform MSE at N_t = 99 is " + num(mse) +
              " dB (-21 +- 2), transmit eigenvalue imaginary residue " + num(imag) + " (<= 1e-9)");
}

void awgn_bound() {
  const double target = snr_for_bound(Modulation::qpsk, 1e-3, 512, 768);
  SweepOptions o;
  o.min_bits = 1000000;
  o.min_errors = 100;
  const std::vector<double> grid = snr_range(7.0, 0.25, 9.0);
  bool ok = true;
  std::string detail;
  for (auto [tx, rx] : {std::pair{TxKind::sc, RxKind::sc}, std::pair{TxKind::uw, RxKind::uw}}) {
    const SweepResult r = sweep(tx, rx, ChannelSpec{}, grid, o);
    const double snr = snr_at_ber(r, 1e-3);
    for (const auto& p : r.points) ok = ok && p.bits >= 1000000 && p.errors >= 100;
    ok = ok && std::abs(snr - target) <= 0.2;
    detail += " " + to_string(tx) + "-" + to_string(rx) + " " + num(snr) + " dB;";
  }
  verdict(4, ok, "QPSK AWGN SNR at BER 1e-3:" + detail + " bound " + num(target) + " dB (+- 0.2 dB)");
}

void papr() {
  ExperimentConfig cfg = default_config("papr");
  cfg.papr_blocks = 100000;
  const nlohmann::json q = experiment_summary(cfg, "papr_qpsk");
  cfg.modulation = Modulation::qam16;
  const nlohmann::json m = experiment_summary(cfg, "papr_16qam");
  const double gq = q["sc_gain_over_uw_db"].get<double>(), gm = m["sc_gain_over_uw_db"].get<double>();
  const double wq = q["uww_minus_sc_db"].get<double>(), wm = m["uww_minus_sc_db"].get<double>();
  verdict(5, std::abs(gq - 2.0) <= 0.5 && std::abs(gm - 1.0) <= 0.5 && std::abs(wq) <= 0.5 && std::abs(wm) <= 0.5,
          "PAPR at CCDF 1e-3 over 1e5 blocks: UW minus SC " + num(gq) + " dB QPSK (2 +- 0.5), " + num(gm) +
              " dB 16QAM (1 +- 0.5); UW-W minus SC " + num(wq) + " / " + num(wm) + " dB (|.| <= 0.5)");
  info("QPSK PAPR sc " + num(q["papr_db_sc"].get<double>()) + ", uw " + num(q["papr_db_uw"].get<double>()) +
       ", uww " + num(q["papr_db_uww"].get<double>()) + " dB");
}

bool fading() {
  ChannelSpec ch;
  ch.kind = ChannelSpec::Kind::tdl;
  ch.memory = 10;
  ch.decay_db_per_tap = 1.0;
  SweepOptions o;
  o.min_trials = 200;
  o.min_errors = 100;
  o.max_bits = 10000000;
  const std::vector<double> grid = snr_range(4.0, 2.0, 24.0);
  const SweepResult sc = sweep(TxKind::sc, RxKind::sc, ch, grid, o);
  const SweepResult uw = sweep(TxKind::uw, RxKind::uw, ch, grid, o);
  const SweepResult scuw = sweep(TxKind::sc, RxKind::uw, ch, grid, o);

  bool below = true;
  for (double s = 10.0; s <= 24.0; s += 2.0) below = below && at(uw, s).ber <= at(sc, s).ber;
  const double gap = snr_at_ber(sc, 1e-2) - snr_at_ber(uw, 1e-2);
  const bool a = below && gap > 0.0;
  const double loss = snr_at_ber(scuw, 1e-2) - snr_at_ber(uw, 1e-2);
  const bool b = loss <= 1.0;

  const std::vector<double> ends{24.0, 30.0};
  const SweepResult uwsc = sweep(TxKind::uw, RxKind::sc, ch, ends, o);
  SweepOptions deep = o;
  deep.max_bits = 300000000;
  const SweepResult uwdeep = sweep(TxKind::uw, RxKind::uw, ch, ends, deep);
  const double floor_ratio = at(uwsc, 30).ber / at(uwsc, 24).ber;
  // UW->UW has too few errors at 30 dB to estimate; bound it from above.
  const double clean_ratio = at(uwdeep, 30).upper_95 / at(uwdeep, 24).ber;
  const bool c = floor_ratio >= 0.5 && clean_ratio <= 0.1 && at(uwdeep, 24).errors >= 100 &&
                 at(uwsc, 24).errors >= 100 && at(uwsc, 30).errors >= 100;

  verdict(6, a && b && c,
          "TDL L=10 (1 dB/tap, >= 200 draws): (a) UW-UW <= SC-SC over 10..24 dB " + std::string(below ? "yes" : "no") +
              ", gap at 1e-2 " + num(gap) + " dB (> 0); (b) SC->UW-rx loss " + num(loss) +
              " dB (<= 1); (c) UW->SC-rx BER(30)/BER(24) " + num(floor_ratio) + " (>= 0.5), UW-UW " +
              num(clean_ratio) + " (<= 0.1, 95% upper bound)");
  info("UW-UW at 24 dB: " + std::to_string(at(uwdeep, 24).errors) + " errors in " +
       std::to_string(at(uwdeep, 24).bits) + " bits; at 30 dB: " + std::to_string(at(uwdeep, 30).errors) +
       " errors in " + std::to_string(at(uwdeep, 30).bits) + " bits");
  for (double s : {10.0, 16.0, 24.0}) {
    info("BER at " + num(s) + " dB: sc-sc " + num(at(sc, s).ber) + ", uw-uw " + num(at(uw, s).ber) + ", sc-uw " +
         num(at(scuw, s).ber));
  }
  return a;
}

void guard_physics() {
  Engine e = make_engine(107);
  const UniqueWord uw = default_unique_word();
  const PulseShape f = design_rrc(67, 0.2, 3), g = matched_filter(f);
  double residual[2] = {0.0, 0.0};
  bool valid[2] = {false, false};
  for (int which = 0; which < 2; ++which) {
    const std::size_t L = which == 0 ? 30 : 31;
    Numerology n = default_numerology();
    // L = 31 has no admissible guard; use the smallest value that still
    // clears the channel on the transmit side.
    n.n_g = which == 0 ? default_guard(n, L) : n.o_tx() + L;
    valid[which] = validate_numerology(n, L).ok();
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexVector taps = random_complex(L + 1, e);
      std::vector<ComplexVector> data;
      for (int i = 0; i < 4; ++i) data.push_back(random_qpsk(448, e));
      const ComplexVector y = linear_convolve(sc_packet(data, uw, n, f).samples, taps);
      for (long i = 1; i < 3; ++i) {
        const long start = static_cast<long>(n.n_g + n.o_rx()) + i * 768;
        residual[which] = std::max(residual[which], testing::cyclicity_residual(y, start, n, g.taps));
      }
    }
  }
  verdict(7, valid[0] && residual[0] <= 1e-10 && !valid[1] && residual[1] > 1e-6,
          "L=30 validates " + std::string(valid[0] ? "yes" : "no") + ", cyclicity residual " + num(residual[0]) +
              " (<= 1e-10); L=31 validates " + (valid[1] ? "yes" : "no") + ", residual " + num(residual[1]) +
              " (> 1e-6)");
}

void reconstruction() {
  LinkScenario s;
  s.noiseless = true;
  s.tx = TxKind::uw;
  s.rx = RxKind::uw;
  const double uw = run_link(s).evm_db;
  s.tx = TxKind::sc;
  s.rx = RxKind::sc;
  const double sc = run_link(s).evm_db;

  // Independent route: direct-sum packet, time-domain receiver.
  Engine e = make_engine(108);
  const Numerology n = default_numerology();
  const UniqueWord word = default_unique_word();
  const PulseShape f = design_rrc(67, 0.2, 3), g = matched_filter(f);
  const EqualizerGains eq = build_mmse_sc(ChannelRealization{}, f, g, n, 0.0);
  double err = 0.0, ref = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<ComplexVector> data{random_qpsk(448, e), random_qpsk(448, e), random_qpsk(448, e)};
    const ComplexVector x = testing::sc_packet_oracle(data, word.symbols, n, f.taps, 3 * 768 + 129);
    const SymbolEstimates est = sc_demodulate_epoch(epoch_extract(x, 1, n, 0), g, n, eq);
    for (std::size_t k = 0; k < 448; ++k) {
      err += std::norm(est.data[k] / eq.mean_signal_gain() - data[1][k]);
      ref += std::norm(data[1][k]);
    }
  }
  const double oracle = 10 * std::log10(err / ref);
  constexpr double kPinned = -67.0;
  verdict(8, uw <= -100.0 && sc > -250.0 && std::abs(sc - kPinned) <= 1.0 && std::abs(oracle - kPinned) <= 1.0,
          "noiseless EVM: UW-UW " + num(uw) + " dB (<= -100); SC-SC rolloff 0.2 " + num(sc) +
              " dB, time-domain oracle " + num(oracle) + " dB, pinned " + num(kPinned) + " +- 1 dB");
}

void two_stage() {
  Engine e = make_engine(109);
  const Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  const SubcarrierMap map = centered_map(n);
  const FrequencyWindow w = design_fd_window(512, 768, 51, 0.2);
  ComplexVector ww(w.support_width);
  for (std::size_t j = 0; j < ww.size(); ++j) ww[j] = w.gain_at(w.support_begin() + static_cast<long>(j));

  double flat = 0.0;
  for (int t = 0; t < 20; ++t) {
    const ChannelRealization h{random_complex(1, e)};
    const double nv = 0.01 * (t + 1);
    const ComplexVector d = random_qpsk(448, e);
    const SymbolEstimates single =
        uw_demodulate(linear_convolve(uw_modulate_symbol(d, uw, map), h.taps), map, build_mmse_uw(h, map, nv), n);
    const SymbolEstimates two = uw_demodulate_two_stage(linear_convolve(uw_w_modulate(d, uw, map, w), h.taps), h,
                                                        w.support_begin(), ww, nv, n);
    flat = std::max(flat, rel_error(two.data, single.data));
  }

  bool snr_ok = true;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ChannelRealization h = make_tdl_channel(10, 1.0, seed);
    const ComplexVector hf = channel_frequency_response(h, 768);
    ComplexVector gcomp(ww.size());
    for (std::size_t j = 0; j < ww.size(); ++j) {
      gcomp[j] = hf[map.bin(w.support_begin() + static_cast<long>(j))] * ww[j];
    }
    const auto comb = two_stage_bin_snr(gcomp, w.support_begin(), 512, 0.1);
    const auto best = best_alias_bin_snr(gcomp, w.support_begin(), 512, 0.1);
    for (std::size_t i = 0; i < 512; ++i) snr_ok = snr_ok && comb[i] >= best[i] * (1 - 1e-12);
  }

  ChannelSpec ch;
  ch.kind = ChannelSpec::Kind::tdl;
  SweepOptions o;
  o.min_trials = 200;
  o.max_bits = 4000000;
  const std::vector<double> grid = snr_range(4.0, 4.0, 24.0);
  const SweepResult two_r = sweep(TxKind::uww, RxKind::uww2, ch, grid, o);
  const SweepResult one_r = sweep(TxKind::uww, RxKind::uw, ch, grid, o);
  bool ber_ok = true;
  std::string pts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ber_ok = ber_ok && two_r.points[i].ber <= one_r.points[i].ber;
    pts += " " + num(grid[i]) + ":" + num(two_r.points[i].ber) + "/" + num(one_r.points[i].ber);
  }
  verdict(9, flat <= 1e-12 && snr_ok && ber_ok,
          "flat-channel two-stage vs single-stage " + num(flat) + " (<= 1e-12); combined bin SNR >= best alias on 200 "
          "TDL draws " + (snr_ok ? "yes" : "no") + "; UW-W BER two-stage <= single-alias at every SNR " +
              (ber_ok ? "yes" : "no"));
  info("snr:two-stage/single-alias BER" + pts);
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);
  resampling();
  sc_dual_path();
  waveform_mse();
  awgn_bound();
  papr();
  const bool proxy = fading();
  guard_physics();
  reconstruction();
  two_stage();
  verdict(10, proxy,
          "coded throughput is not reproducible here (needs the 802.11ad LDPC/MCS chain); its uncoded proxy, "
          "criterion 6(a), " + std::string(proxy ? "holds" : "does not hold"));
  std::filesystem::remove_all(scratch("").parent_path());
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
