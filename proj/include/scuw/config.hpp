#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scuw/link.hpp"
#include "scuw/metrics.hpp"
#include "scuw/modem.hpp"
#include "scuw/sc_waveform.hpp"

namespace scuw {

/// Raised for malformed or invalid configuration; what() carries
/// "file:line: message" when the location is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed configuration file: the value tree plus the line on which each
/// dotted key ("sweep.min_errors") was defined.
struct ConfigDocument {
  nlohmann::json value = nlohmann::json::object();
  std::map<std::string, int> lines;
  std::string source;

  /// "source:line: " for a key, or "source: " if unknown.
  std::string where(const std::string& dotted_key) const;
};

ConfigDocument parse_json_config(const std::string& text, const std::string& source = "<json>");

/// TOML subset: [table] headers (one level), key = value with strings,
/// integers, floats, booleans and flat arrays of those, '#' comments.
ConfigDocument parse_toml_config(const std::string& text, const std::string& source = "<toml>");

/// Picks the parser from the extension (.json, .toml). Throws ConfigError.
ConfigDocument load_config_file(const std::filesystem::path& path);

/// One transmitter/receiver pairing.
struct Pairing {
  TxKind tx = TxKind::sc;
  RxKind rx = RxKind::sc;

  std::string name() const { return to_string(tx) + "-" + to_string(rx); }
};
Pairing parse_pairing(const std::string& s);

struct ExperimentConfig {
  std::string experiment = "ber-awgn";
  std::uint64_t seed = 1;
  std::string out = "results";

  Numerology numerology;
  bool n_g_auto = true;   ///< derive N_g from the channel memory
  bool n_t_auto = true;   ///< derive N_t from the alignment condition

  Modulation modulation = Modulation::qpsk;
  double rolloff = 0.2;
  std::size_t extension_bins = 51;
  std::size_t n_cp = 0;
  std::string unique_word_file;

  ChannelSpec channel;
  std::string channel_file;

  std::vector<Pairing> pairings;
  std::vector<double> snr_db;
  SweepOptions sweep;
  std::size_t n_blocks = 8;

  std::size_t papr_blocks = 100000;
  std::size_t oversample = 4;
  double ccdf_probability = 1e-3;
  std::size_t mse_blocks = 200;

  std::string dump_iq;

  nlohmann::json to_json() const;
};

/// Defaults for a named experiment (waveform-mse, papr, ber-awgn,
/// ber-fading, crosslink). Throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string& experiment);

/// Overlays a document on `cfg`. Unknown keys and type errors raise
/// ConfigError with the offending line.
void apply_config(ExperimentConfig& cfg, const ConfigDocument& doc);

/// Resolves automatic fields (N_t, N_g), reads CSV inputs, and checks the
/// result. Throws ConfigError.
void finalize_config(ExperimentConfig& cfg);

/// "start:step:stop" in dB.
std::vector<double> parse_snr_range(const std::string& spec);

}  // namespace scuw
