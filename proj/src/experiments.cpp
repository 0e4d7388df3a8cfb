#include "scuw/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "scuw/csv_io.hpp"
#include "scuw/metrics.hpp"
#include "scuw/multirate.hpp"
#include "scuw/rng.hpp"
#include "scuw/sc_waveform.hpp"
#include "scuw/uw_waveform.hpp"

#ifndef SCUW_GIT_DESCRIBE
#define SCUW_GIT_DESCRIBE "unknown"
#endif

namespace scuw {

using nlohmann::json;

std::string build_git_describe() { return SCUW_GIT_DESCRIBE; }

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

UniqueWord unique_word_for(const ExperimentConfig& cfg) {
  if (!cfg.unique_word_file.empty()) return read_unique_word_csv(cfg.unique_word_file, cfg.numerology.m_h);
  return default_unique_word(cfg.numerology.m_s, cfg.numerology.m_h);
}

// Per-block random symbols shared by every curve of an experiment.
std::vector<ComplexVector> random_blocks(const ExperimentConfig& cfg, const Constellation& c,
                                         std::uint64_t packet, std::size_t count) {
  Engine engine = make_engine(cfg.seed, {packet, 1});
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<ComplexVector> out;
  Bits bits(cfg.numerology.m_d() * c.bits_per_symbol());
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& b : bits) b = static_cast<std::uint8_t>(coin(engine));
    out.push_back(map_bits(bits, c));
  }
  return out;
}

std::ofstream open_csv(const std::filesystem::path& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  return out;
}

void log_line(std::ostream* log, const std::string& s) {
  if (log) *log << s << std::endl;
}

json run_waveform_mse(const ExperimentConfig& cfg, const std::filesystem::path& csv, std::ostream* log) {
  const Numerology& n = cfg.numerology;
  const UniqueWord uw = unique_word_for(cfg);
  const PulseShape f = design_rrc(n.l_tx, cfg.rolloff, n.a);
  const SubcarrierMap map = centered_map(n);
  const FrequencyWindow window = design_fd_window(n.m, n.n(), cfg.extension_bins, cfg.rolloff);
  const Constellation c = make_constellation(cfg.modulation);
  constexpr std::size_t kPerPacket = 10;
  const std::size_t nn = n.n();
  const std::size_t tail = n.trailer_length();
  if (n.n_t < 0 || static_cast<std::size_t>(n.n_t) > tail) {
    throw std::invalid_argument("waveform-mse: N_t must lie in [0, trailer length]");
  }

  double err_uw = 0.0, err_w = 0.0, ref = 0.0;
  std::size_t done = 0;
  for (std::uint64_t packet = 0; done < cfg.mse_blocks; ++packet) {
    const std::size_t count = std::min(kPerPacket, cfg.mse_blocks - done);
    const auto data = random_blocks(cfg, c, packet, count);
    const SamplePacket p = sc_packet(data, uw, n, f);
    for (std::size_t i = 0; i < count; ++i) {
      const ComplexVector xu = uw_modulate_symbol(data[i], uw, map);
      const ComplexVector xw = uw_w_modulate(data[i], uw, map, window);
      for (std::size_t k = 0; k < nn; ++k) {
        const Complex s = p.samples[static_cast<std::size_t>(n.n_t) + i * nn + k];
        err_uw += std::norm(s - xu[k]);
        err_w += std::norm(s - xw[k]);
        ref += std::norm(s);
      }
    }
    done += count;
  }
  const DiagonalOperator lambda = sc_tx_eigenvalues(f, n);
  double max_imag = 0.0;
  for (const auto& v : lambda.gains) max_imag = std::max(max_imag, std::abs(v.imag()));

  const double mse_uw = 10.0 * std::log10(err_uw / ref);
  const double mse_w = 10.0 * std::log10(err_w / ref);
  auto out = open_csv(csv, "curve,rolloff,n_t,extension_bins,blocks,mse_db");
  out << "sc_vs_uw," << fmt(cfg.rolloff) << ',' << n.n_t << ",0," << cfg.mse_blocks << ',' << fmt(mse_uw) << '\n';
  if (cfg.extension_bins > 0) {
    out << "sc_vs_uww," << fmt(cfg.rolloff) << ',' << n.n_t << ',' << cfg.extension_bins << ','
        << cfg.mse_blocks << ',' << fmt(mse_w) << '\n';
  }
  log_line(log, "waveform-mse: SC vs UW " + fmt(mse_uw) + " dB over " + std::to_string(cfg.mse_blocks) + " blocks");

  if (!cfg.dump_iq.empty()) {
    const auto data = random_blocks(cfg, c, 0, std::min<std::size_t>(kPerPacket, cfg.mse_blocks));
    write_iq_raw(cfg.dump_iq, sc_packet(data, uw, n, f).samples);
  }
  json s = {{"mse_db_sc_vs_uw", mse_uw}, {"lambda_max_imag", max_imag}, {"n_t", n.n_t}};
  if (cfg.extension_bins > 0) s["mse_db_sc_vs_uww"] = mse_w;
  return s;
}

json run_papr(const ExperimentConfig& cfg, const std::filesystem::path& csv, std::ostream* log) {
  const Numerology& n = cfg.numerology;
  const UniqueWord uw = unique_word_for(cfg);
  const PulseShape f = design_rrc(n.l_tx, cfg.rolloff, n.a);
  const SubcarrierMap map = centered_map(n);
  const FrequencyWindow window = design_fd_window(n.m, n.n(), cfg.extension_bins, cfg.rolloff);
  const Constellation c = make_constellation(cfg.modulation);
  constexpr std::size_t kPerPacket = 50;
  const std::size_t nn = n.n();

  std::vector<double> sc, uwp, uww;
  for (std::uint64_t packet = 0; sc.size() < cfg.papr_blocks; ++packet) {
    const std::size_t count = std::min(kPerPacket, cfg.papr_blocks - sc.size());
    const auto data = random_blocks(cfg, c, packet, count);
    const SamplePacket p = sc_packet(data, uw, n, f);
    if (packet == 0 && !cfg.dump_iq.empty()) write_iq_raw(cfg.dump_iq, p.samples);
    for (std::size_t i = 0; i < count; ++i) {
      const std::span<const Complex> block(p.samples.data() + n.n_t + i * nn, nn);
      sc.push_back(papr_db(block, cfg.oversample));
      uwp.push_back(papr_db(uw_modulate_symbol(data[i], uw, map), cfg.oversample));
      uww.push_back(papr_db(uw_w_modulate(data[i], uw, map, window), cfg.oversample));
    }
  }

  auto out = open_csv(csv, "curve,papr_db,ccdf");
  json summary = json::object();
  const std::pair<const char*, std::vector<double>*> curves[] = {{"sc", &sc}, {"uw", &uwp}, {"uww", &uww}};
  for (const auto& [name, values] : curves) {
    std::vector<double> sorted = *values;
    std::sort(sorted.begin(), sorted.end());
    const double total = static_cast<double>(sorted.size());
    for (int step = 0; step <= 320; ++step) {
      const double thr = 0.05 * step;
      const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), thr);
      out << name << ',' << fmt(thr) << ',' << fmt(static_cast<double>(above) / total) << '\n';
    }
    const double at = value_at_ccdf(*values, cfg.ccdf_probability);
    summary[std::string("papr_db_") + name] = at;
    log_line(log, std::string("papr: ") + name + " " + fmt(at) + " dB at CCDF " + fmt(cfg.ccdf_probability));
  }
  summary["ccdf_probability"] = cfg.ccdf_probability;
  summary["blocks"] = sc.size();
  summary["sc_gain_over_uw_db"] = summary["papr_db_uw"].get<double>() - summary["papr_db_sc"].get<double>();
  summary["uww_minus_sc_db"] = summary["papr_db_uww"].get<double>() - summary["papr_db_sc"].get<double>();
  return summary;
}

json run_ber(const ExperimentConfig& cfg, const std::filesystem::path& csv, std::ostream* log) {
  const Numerology& n = cfg.numerology;
  if (cfg.pairings.empty()) throw std::invalid_argument("ber sweep: no tx/rx pairings configured");
  if (cfg.snr_db.empty()) throw std::invalid_argument("ber sweep: empty SNR list");
  auto out = open_csv(csv, "curve,snr_db,ebn0_db,ber,bits,errors,std_error,upper_95");
  json summary = json::object();
  for (double snr : cfg.snr_db) {
    const double ebn0 = ebn0_from_snr(snr, n.m, n.n(), cfg.modulation);
    out << "bound," << fmt(snr) << ',' << fmt(10.0 * std::log10(ebn0)) << ','
        << fmt(ber_bound(cfg.modulation, ebn0)) << ",0,0,0,0\n";
  }
  bool dumped = false;
  for (const Pairing& pr : cfg.pairings) {
    LinkSimulator sim(scenario_for(cfg, pr));
    if (!dumped && !cfg.dump_iq.empty()) {
      write_iq_raw(cfg.dump_iq, sim.transmit_packet(0).samples);
      dumped = true;
    }
    const SweepResult r = ber_sweep(sim, cfg.snr_db, cfg.sweep);
    for (const auto& p : r.points) {
      const double ebn0 = ebn0_from_snr(p.snr_db, n.m, n.n(), cfg.modulation);
      out << pr.name() << ',' << fmt(p.snr_db) << ',' << fmt(10.0 * std::log10(ebn0)) << ','
          << fmt(p.ber) << ',' << p.bits << ',' << p.errors << ',' << fmt(p.std_error) << ','
          << fmt(p.upper_95) << '\n';
      log_line(log, cfg.experiment + ": " + pr.name() + " snr " + fmt(p.snr_db) + " dB ber " +
                        fmt(p.ber) + " (" + std::to_string(p.errors) + "/" + std::to_string(p.bits) + ")");
    }
    summary[pr.name()] = {{"snr_at_ber_1e-2", number_or_null(snr_at_ber(r, 1e-2))},
                          {"snr_at_ber_1e-3", number_or_null(snr_at_ber(r, 1e-3))}};
  }
  summary["bound_snr_at_ber_1e-3"] = snr_for_bound(cfg.modulation, 1e-3, n.m, n.n());
  return summary;
}

}  // namespace

LinkScenario scenario_for(const ExperimentConfig& cfg, const Pairing& pairing) {
  LinkScenario s;
  s.tx = pairing.tx;
  s.rx = pairing.rx;
  s.numerology = cfg.numerology;
  s.modulation = cfg.modulation;
  s.channel = cfg.channel;
  s.seed = cfg.seed;
  s.n_blocks = cfg.n_blocks;
  s.rolloff = cfg.rolloff;
  s.extension_bins = cfg.extension_bins;
  s.n_cp = cfg.n_cp;
  s.unique_word = unique_word_for(cfg);
  return s;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.out);
  ExperimentOutput result;
  result.csv = std::filesystem::path(cfg.out) / (cfg.experiment + ".csv");
  result.manifest = std::filesystem::path(cfg.out) / "manifest.json";

  if (cfg.experiment == "waveform-mse") {
    result.summary = run_waveform_mse(cfg, result.csv, log);
  } else if (cfg.experiment == "papr") {
    result.summary = run_papr(cfg, result.csv, log);
  } else if (cfg.experiment == "ber-awgn" || cfg.experiment == "ber-fading" ||
             cfg.experiment == "crosslink") {
    result.summary = run_ber(cfg, result.csv, log);
  } else {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = {{"schema_version", kManifestSchemaVersion},
                   {"csv_schema_version", kCsvSchemaVersion},
                   {"experiment", cfg.experiment},
                   {"csv", result.csv.filename().string()},
                   {"seed", cfg.seed},
                   {"git_describe", build_git_describe()},
                   {"wall_time_s", wall},
                   {"config", cfg.to_json()},
                   {"summary", result.summary}};
  std::ofstream m(result.manifest);
  if (!m) throw std::runtime_error("cannot write " + result.manifest.string());
  m << manifest.dump(2) << '\n';
  return result;
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto report = [&](bool ok, const std::string& name, double metric) {
    out << (ok ? "PASS " : "FAIL ") << name << " (" << fmt(metric) << ")\n";
    all = all && ok;
  };
  auto rel = [](const ComplexVector& x, const ComplexVector& y) {
    double e = 0.0, r = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      e += std::norm(x[k] - y[k]);
      r += std::norm(y[k]);
    }
    return r > 0.0 ? std::sqrt(e / r) : std::sqrt(e);
  };
  Engine engine = make_engine(2024);
  std::normal_distribution<double> normal;
  auto random_vec = [&](std::size_t len) {
    ComplexVector v(len);
    for (auto& x : v) x = Complex(normal(engine), normal(engine));
    return v;
  };

  double worst = 0.0;
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t len : {12ul, 1536ul}) {
      const ComplexVector x = random_vec(len);
      worst = std::max(worst, rel(upsample_dft(x, a), upsample_time(x, a)));
      worst = std::max(worst, rel(downsample_dft(x, a), downsample_time(x, a)));
    }
  }
  report(worst <= 1e-10, "resampling DFT path equals time path", worst);

  {
    const ComplexVector x = random_vec(1536), c = random_vec(67);
    const double e = rel(apply_circulant(circulant_eigenvalues(c, 1536), x),
                         circular_convolve(x, c, ConvolutionPath::direct));
    report(e <= 1e-10, "circulant eigenvalues reproduce circular convolution", e);
  }

  Numerology n = default_numerology();
  const UniqueWord uw = default_unique_word();
  for (double rho : {0.0, 0.2, 0.3}) {
    const PulseShape f = design_rrc(n.l_tx, rho, n.a);
    const PulseShape g = matched_filter(f);
    std::vector<ComplexVector> data;
    for (int i = 0; i < 3; ++i) {
      ComplexVector d = random_vec(n.m_d());
      for (auto& v : d) v /= std::sqrt(2.0);
      data.push_back(d);
    }
    const SamplePacket p = sc_packet(data, uw, n, f);
    double e_tx = 0.0;
    for (long nt : {static_cast<long>(n.o_tx()), 64L, 95L}) {
      Numerology m = n;
      m.n_t = nt;
      const ComplexVector dft_epoch = sc_modulate_block_dft(data[1], uw, m, sc_tx_eigenvalues(f, m));
      const ComplexVector slice(p.samples.begin() + nt + static_cast<long>(n.n()),
                                p.samples.begin() + nt + 2 * static_cast<long>(n.n()));
      e_tx = std::max(e_tx, rel(dft_epoch, slice));
    }
    report(e_tx <= 1e-9, "SC transmitter DFT form, rolloff " + fmt(rho), e_tx);

    const EqualizerGains eq = build_mmse_sc(ChannelRealization{}, f, g, n, 0.01);
    const ComplexVector epoch = epoch_extract(p.samples, 1, n);
    const SymbolEstimates t = sc_demodulate_epoch(epoch, g, n, eq);
    const ComplexVector core(epoch.begin() + static_cast<long>(n.o_rx()), epoch.end());
    const SymbolEstimates d = sc_demodulate_epoch_dft(core, sc_rx_eigenvalues(g, n), eq, n);
    report(rel(t.data, d.data) <= 1e-10, "SC receiver DFT form, rolloff " + fmt(rho), rel(t.data, d.data));

    const DiagonalOperator lambda = sc_tx_eigenvalues(f, n);
    double max_imag = 0.0;
    for (const auto& v : lambda.gains) max_imag = std::max(max_imag, std::abs(v.imag()));
    report(max_imag <= 1e-9, "transmit eigenvalues real at the aligned offset, rolloff " + fmt(rho), max_imag);
  }

  {
    const SubcarrierMap map = centered_map(n);
    const ComplexVector d = random_vec(n.m_d());
    const EqualizerGains eq = build_mmse_uw(ChannelRealization{}, map, 0.0);
    const SymbolEstimates est = uw_demodulate(uw_modulate_symbol(d, uw, map), map, eq, n);
    report(rel(est.data, d) <= 1e-10, "UW perfect reconstruction", rel(est.data, d));
  }
  return all;
}

}  // namespace scuw
