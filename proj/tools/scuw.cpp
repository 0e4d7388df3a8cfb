// scuw: waveform experiments for SC-FDE and UW DFT-s-OFDM.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "scuw/config.hpp"
#include "scuw/experiments.hpp"
#include "scuw/sc_waveform.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> snr;
  std::optional<std::string> mod;
  std::optional<double> rolloff;
  std::optional<std::string> tx;
  std::optional<std::string> rx;
  std::optional<std::size_t> taps;
  std::optional<std::size_t> min_errors;
  std::optional<std::string> dump_iq;
  bool quiet = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON or TOML experiment config");
  app->add_option("--seed", o.seed, "64-bit seed; all randomness derives from it");
  app->add_option("--out", o.out, "output directory (default: results)");
  app->add_option("--snr", o.snr,
                  "SNR sweep start:step:stop in dB, per complex sample at the receiver input");
  app->add_option("--mod", o.mod, "bpsk | qpsk | 16qam")->check(CLI::IsMember({"bpsk", "qpsk", "16qam"}));
  app->add_option("--rolloff", o.rolloff, "RRC rolloff in [0, 1]")->check(CLI::Range(0.0, 1.0));
  app->add_option("--tx", o.tx, "transmitter sc | uw | uww")->check(CLI::IsMember({"sc", "uw", "uww"}));
  app->add_option("--rx", o.rx, "receiver sc | uw | uww2")->check(CLI::IsMember({"sc", "uw", "uww2"}));
  app->add_option("--taps", o.taps, "channel memory L of the TDL channel");
  app->add_option("--min-errors", o.min_errors, "bit errors required per SNR point");
  app->add_option("--dump-iq", o.dump_iq, "write transmitted samples as float64 LE I/Q");
  app->add_flag("-q,--quiet", o.quiet, "no progress output");
}

scuw::ExperimentConfig build_config(const std::string& experiment, const Overrides& o) {
  scuw::ExperimentConfig cfg = scuw::default_config(experiment);
  if (!o.config.empty()) {
    const scuw::ConfigDocument doc = scuw::load_config_file(o.config);
    scuw::apply_config(cfg, doc);
    if (cfg.experiment != experiment) {
      throw scuw::ConfigError(doc.where("experiment") + "config is for '" + cfg.experiment +
                              "', command is '" + experiment + "'");
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  if (o.snr) cfg.snr_db = scuw::parse_snr_range(*o.snr);
  if (o.mod) cfg.modulation = scuw::parse_modulation(*o.mod);
  if (o.rolloff) cfg.rolloff = *o.rolloff;
  if (o.taps) {
    cfg.channel.memory = *o.taps;
    if (cfg.channel.kind == scuw::ChannelSpec::Kind::awgn) cfg.channel.kind = scuw::ChannelSpec::Kind::tdl;
  }
  if (o.min_errors) cfg.sweep.min_errors = *o.min_errors;
  if (o.dump_iq) cfg.dump_iq = *o.dump_iq;
  if (o.tx || o.rx) {
    scuw::Pairing p = cfg.pairings.empty() ? scuw::Pairing{} : cfg.pairings.front();
    if (o.tx) p.tx = scuw::parse_tx_kind(*o.tx);
    if (o.rx) p.rx = scuw::parse_rx_kind(*o.rx);
    cfg.pairings = {p};
  }
  scuw::finalize_config(cfg);
  return cfg;
}

int run(const std::string& experiment, const Overrides& o) {
  const scuw::ExperimentConfig cfg = build_config(experiment, o);
  const auto result = scuw::run_experiment(cfg, o.quiet ? nullptr : &std::cerr);
  std::cout << result.csv.string() << '\n' << result.manifest.string() << '\n';
  return 0;
}

int validate(const Overrides& o, std::size_t taps) {
  scuw::ExperimentConfig cfg = scuw::default_config("ber-fading");
  if (!o.config.empty()) scuw::apply_config(cfg, scuw::load_config_file(o.config));
  scuw::Numerology n = cfg.numerology;
  if (cfg.n_t_auto) n.n_t = scuw::aligned_tx_offset(n);
  if (cfg.n_g_auto) {
    try {
      n.n_g = scuw::default_guard(n, taps);
    } catch (const std::invalid_argument&) {
      n.n_g = scuw::default_guard(n, 0);
    }
  }
  const scuw::ValidationReport r = scuw::validate_numerology(n, taps);
  std::cout << "M=" << n.m << " M_s=" << n.m_s << " M_h=" << n.m_h << " a=" << n.a << " b=" << n.b
            << " L_tx=" << n.l_tx << " L_rx=" << n.l_rx << " N=" << n.n() << " O_tx=" << n.o_tx()
            << " O_rx=" << n.o_rx() << " T_tx=" << n.t_tx() << " N_t=" << n.n_t << " N_g=" << n.n_g << '\n';
  std::cout << "channel memory L=" << taps << '\n';
  std::cout << "guard interval [" << r.guard_min << ", " << r.guard_max << "] "
            << (r.guard_ok ? "ok" : "VIOLATED") << '\n';
  std::cout << "isi bound " << r.isi_lhs << " >= " << r.isi_rhs << ' ' << (r.isi_ok ? "ok" : "VIOLATED") << '\n';
  for (const auto& f : r.failures) std::cout << "failure: " << f << '\n';
  for (const auto& note : r.notes) std::cout << "note: " << note << '\n';
  std::cout << (r.ok() ? "VALID" : "INVALID") << '\n';
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SC-FDE / UW DFT-s-OFDM waveform experiments.\n"
               "SNR is the average received signal power over the noise variance per complex\n"
               "sample, measured after the channel and before any receive filter."};
  app.require_subcommand(1);
  Overrides o;
  std::size_t validate_taps = 10;
  const char* experiments[] = {"waveform-mse", "papr", "ber-awgn", "ber-fading", "crosslink"};
  const char* help[] = {"SC vs UW DFT-s-OFDM waveform MSE at the aligned offset",
                        "PAPR CCDF of SC, UW and windowed UW waveforms",
                        "uncoded BER over AWGN for several tx/rx pairings",
                        "uncoded BER over a tapped-delay-line fading channel",
                        "BER of one tx/rx pairing (--tx, --rx) over fading"};
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(experiments[i], help[i]), o);
  auto* val = app.add_subcommand("validate", "check the numerology against a channel memory");
  val->add_option("--config", o.config, "JSON or TOML config with a [numerology] table");
  val->add_option("--taps", validate_taps, "channel memory L");
  app.add_subcommand("selftest", "run the dual-path identity checks");

  CLI11_PARSE(app, argc, argv);
  try {
    for (const auto* sub : app.get_subcommands()) {
      const std::string name = sub->get_name();
      if (name == "validate") return validate(o, validate_taps);
      if (name == "selftest") return scuw::run_selftest(std::cout) ? 0 : 1;
      return run(name, o);
    }
  } catch (const scuw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
