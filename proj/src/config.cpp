#include "scuw/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "scuw/csv_io.hpp"
#include "scuw/uw_waveform.hpp"

namespace scuw {

using nlohmann::json;

std::string ConfigDocument::where(const std::string& dotted_key) const {
  auto it = lines.find(dotted_key);
  if (it == lines.end()) return source + ": ";
  return source + ":" + std::to_string(it->second) + ": ";
}

namespace {

// Records the line of every object key by walking the raw JSON text. The
// text has already been validated by nlohmann::json, so this scanner only
// needs to track strings, nesting and newlines.
void scan_json_lines(const std::string& text, std::map<std::string, int>& lines) {
  int line = 1;
  std::vector<std::string> path;      // key stack for objects, "" for arrays
  std::vector<bool> in_object;
  std::string pending_key;
  bool expect_key = false;
  std::size_t i = 0;
  auto read_string = [&]() {
    std::string s;
    ++i;  // opening quote
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < text.size()) {
        s += text[i + 1];
        i += 2;
        continue;
      }
      if (text[i] == '\n') ++line;
      s += text[i++];
    }
    ++i;
    return s;
  };
  auto dotted = [&](const std::string& key) {
    std::string out;
    for (const auto& p : path) {
      if (p.empty()) return std::string{};
      out += p + ".";
    }
    return out + key;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '"') {
      const int start_line = line;
      std::string s = read_string();
      if (expect_key) {
        pending_key = s;
        const std::string d = dotted(s);
        if (!d.empty() && !lines.count(d)) lines[d] = start_line;
        expect_key = false;
      }
    } else if (c == '{') {
      if (!in_object.empty()) path.push_back(in_object.back() ? pending_key : std::string{});
      in_object.push_back(true);
      expect_key = true;
      ++i;
    } else if (c == '[') {
      if (!in_object.empty()) path.push_back(in_object.back() ? pending_key : std::string{});
      in_object.push_back(false);
      ++i;
    } else if (c == '}' || c == ']') {
      if (!in_object.empty()) in_object.pop_back();
      if (!path.empty() && !in_object.empty()) path.pop_back();
      ++i;
    } else if (c == ',') {
      expect_key = !in_object.empty() && in_object.back();
      ++i;
    } else {
      ++i;
    }
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

json parse_toml_scalar(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError(where + "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ConfigError(where + "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char n = v[++i];
        out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
      } else {
        out += v[i];
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::string num;
  for (char c : v) {
    if (c != '_') num += c;
  }
  const char* end = num.data() + num.size();
  const bool looks_float = num.find_first_of(".eE") != std::string::npos || num == "inf" ||
                           num == "-inf" || num == "nan";
  if (!looks_float) {
    long long iv = 0;
    auto [p, ec] = std::from_chars(num.data() + (num.front() == '+' ? 1 : 0), end, iv);
    if (ec == std::errc() && p == end) return iv;
  }
  double dv = 0.0;
  auto [p, ec] = std::from_chars(num.data() + (num.front() == '+' ? 1 : 0), end, dv);
  if (ec == std::errc() && p == end) return dv;
  throw ConfigError(where + "cannot parse value '" + v + "'");
}

json parse_toml_value(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError(where + "unterminated array (arrays must fit on one line)");
    json arr = json::array();
    const std::string body = v.substr(1, v.size() - 2);
    std::string item;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        if (!trim(item).empty()) arr.push_back(parse_toml_scalar(item, where));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!trim(item).empty()) arr.push_back(parse_toml_scalar(item, where));
    return arr;
  }
  return parse_toml_scalar(v, where);
}

bool valid_bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

// ---- typed accessors -------------------------------------------------------

class Reader {
 public:
  Reader(const ConfigDocument& doc) : doc_(doc) {}

  const json* find(const std::string& table, const std::string& key) {
    const json* node = &doc_.value;
    if (!table.empty()) {
      auto it = node->find(table);
      if (it == node->end()) return nullptr;
      node = &*it;
    }
    auto it = node->find(key);
    if (it == node->end()) return nullptr;
    seen_.insert(dotted(table, key));
    return &*it;
  }

  [[noreturn]] void fail(const std::string& table, const std::string& key, const std::string& msg) {
    const std::string d = dotted(table, key);
    throw ConfigError(doc_.where(d) + d + " " + msg);
  }

  template <typename Fn>
  void with(const std::string& table, const std::string& key, Fn fn) {
    if (const json* v = find(table, key)) fn(*v);
  }

  void get_uint(const std::string& table, const std::string& key, std::size_t& out, std::size_t min = 0) {
    with(table, key, [&](const json& v) {
      if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
        fail(table, key, "must be an integer >= " + std::to_string(min));
      }
      out = v.get<std::size_t>();
    });
  }

  void get_u64(const std::string& table, const std::string& key, std::uint64_t& out) {
    with(table, key, [&](const json& v) {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        fail(table, key, "must be a non-negative integer");
      }
      out = v.get<std::uint64_t>();
    });
  }

  void get_double(const std::string& table, const std::string& key, double& out) {
    with(table, key, [&](const json& v) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) fail(table, key, "must be a finite number");
      out = v.get<double>();
    });
  }

  void get_string(const std::string& table, const std::string& key, std::string& out) {
    with(table, key, [&](const json& v) {
      if (!v.is_string()) fail(table, key, "must be a string");
      out = v.get<std::string>();
    });
  }

  // Every key present in the document must have been consumed.
  void reject_unknown() {
    for (const auto& [k, v] : doc_.value.items()) {
      if (v.is_object()) {
        for (const auto& [k2, v2] : v.items()) {
          (void)v2;
          const std::string d = k + "." + k2;
          if (!seen_.count(d)) throw ConfigError(doc_.where(d) + "unknown key '" + d + "'");
        }
      } else if (!seen_.count(k)) {
        throw ConfigError(doc_.where(k) + "unknown key '" + k + "'");
      }
    }
  }

 private:
  static std::string dotted(const std::string& table, const std::string& key) {
    return table.empty() ? key : table + "." + key;
  }

  const ConfigDocument& doc_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigDocument parse_json_config(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  doc.source = source;
  try {
    doc.value = json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line number.
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  if (!doc.value.is_object()) throw ConfigError(source + ":1: top level must be an object");
  scan_json_lines(text, doc.lines);
  return doc;
}

ConfigDocument parse_toml_config(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw, table;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(where + "malformed table header");
      table = trim(line.substr(1, line.size() - 2));
      if (!valid_bare_key(table)) throw ConfigError(where + "unsupported table name '" + table + "'");
      if (doc.value.contains(table)) throw ConfigError(where + "table [" + table + "] defined twice");
      doc.value[table] = json::object();
      doc.lines[table] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_bare_key(key)) throw ConfigError(where + "unsupported key '" + key + "'");
    json& target = table.empty() ? doc.value : doc.value[table];
    if (target.contains(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    target[key] = parse_toml_value(line.substr(eq + 1), where);
    doc.lines[table.empty() ? key : table + "." + key] = line_no;
  }
  return doc;
}

ConfigDocument load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string ext = path.extension().string();
  if (ext == ".json") return parse_json_config(ss.str(), path.string());
  if (ext == ".toml") return parse_toml_config(ss.str(), path.string());
  throw ConfigError(path.string() + ": unknown config format (use .json or .toml)");
}

Pairing parse_pairing(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("pairing '" + s + "' must look like tx-rx");
  return Pairing{parse_tx_kind(s.substr(0, dash)), parse_rx_kind(s.substr(dash + 1))};
}

std::vector<double> parse_snr_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) {
    double v = 0.0;
    const std::string t = trim(p);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw std::invalid_argument("snr range '" + spec + "': '" + p + "' is not a number");
    }
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw std::invalid_argument("snr range '" + spec + "' must be start:step:stop");
  return snr_range(parts[0], parts[1], parts[2]);
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "waveform-mse") {
    c.rolloff = 0.0;
    c.extension_bins = 0;
    c.modulation = Modulation::bpsk;
  } else if (experiment == "papr") {
    c.pairings = {};
  } else if (experiment == "ber-awgn") {
    c.pairings = {{TxKind::sc, RxKind::sc}, {TxKind::uw, RxKind::uw}, {TxKind::sc, RxKind::uw},
                  {TxKind::uw, RxKind::sc}, {TxKind::uww, RxKind::uww2}};
    c.snr_db = snr_range(0.0, 1.0, 10.0);
  } else if (experiment == "ber-fading") {
    c.channel.kind = ChannelSpec::Kind::tdl;
    c.pairings = {{TxKind::sc, RxKind::sc}, {TxKind::uw, RxKind::uw}, {TxKind::sc, RxKind::uw},
                  {TxKind::uw, RxKind::sc}, {TxKind::uww, RxKind::uww2}, {TxKind::uww, RxKind::uw}};
    c.snr_db = snr_range(10.0, 2.0, 30.0);
    c.sweep.min_trials = 200;
    c.sweep.max_bits = 10000000;
  } else if (experiment == "crosslink") {
    c.channel.kind = ChannelSpec::Kind::tdl;
    c.pairings = {{TxKind::uw, RxKind::sc}};
    c.snr_db = snr_range(10.0, 2.0, 30.0);
    c.sweep.min_trials = 200;
    c.sweep.max_bits = 10000000;
  } else {
    throw ConfigError("unknown experiment '" + experiment +
                      "' (expected waveform-mse, papr, ber-awgn, ber-fading or crosslink)");
  }
  return c;
}

void apply_config(ExperimentConfig& cfg, const ConfigDocument& doc) {
  Reader r(doc);
  r.get_string("", "experiment", cfg.experiment);
  r.get_u64("", "seed", cfg.seed);
  r.get_string("", "out", cfg.out);
  r.get_string("", "unique_word_file", cfg.unique_word_file);
  r.get_string("", "dump_iq", cfg.dump_iq);

  Numerology& n = cfg.numerology;
  r.get_uint("numerology", "m", n.m, 1);
  r.get_uint("numerology", "m_s", n.m_s, 1);
  r.get_uint("numerology", "m_h", n.m_h);
  r.get_uint("numerology", "a", n.a, 1);
  r.get_uint("numerology", "b", n.b, 1);
  r.get_uint("numerology", "l_tx", n.l_tx, 1);
  r.get_uint("numerology", "l_rx", n.l_rx, 1);
  r.with("numerology", "n_g", [&](const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 0) r.fail("numerology", "n_g", "must be an integer >= 0");
    n.n_g = v.get<std::size_t>();
    cfg.n_g_auto = false;
  });
  r.with("numerology", "n_t", [&](const json& v) {
    if (!v.is_number_integer()) r.fail("numerology", "n_t", "must be an integer");
    n.n_t = v.get<long>();
    cfg.n_t_auto = false;
  });

  r.with("waveform", "modulation", [&](const json& v) {
    try {
      cfg.modulation = parse_modulation(v.is_string() ? v.get<std::string>() : "");
    } catch (const std::invalid_argument& e) {
      r.fail("waveform", "modulation", std::string(": ") + e.what());
    }
  });
  r.get_double("waveform", "rolloff", cfg.rolloff);
  if (cfg.rolloff < 0.0 || cfg.rolloff > 1.0) r.fail("waveform", "rolloff", "must lie in [0, 1]");
  r.get_uint("waveform", "extension_bins", cfg.extension_bins);
  r.get_uint("waveform", "n_cp", cfg.n_cp);

  r.with("channel", "kind", [&](const json& v) {
    const std::string k = v.is_string() ? v.get<std::string>() : "";
    if (k == "awgn") cfg.channel.kind = ChannelSpec::Kind::awgn;
    else if (k == "tdl") cfg.channel.kind = ChannelSpec::Kind::tdl;
    else if (k == "file") cfg.channel.kind = ChannelSpec::Kind::fixed;
    else r.fail("channel", "kind", "must be \"awgn\", \"tdl\" or \"file\"");
  });
  r.get_uint("channel", "taps", cfg.channel.memory);
  r.get_double("channel", "decay_db", cfg.channel.decay_db_per_tap);
  r.get_string("channel", "file", cfg.channel_file);

  r.with("link", "pairs", [&](const json& v) {
    if (!v.is_array() || v.empty()) r.fail("link", "pairs", "must be a non-empty array of \"tx-rx\" strings");
    std::vector<Pairing> p;
    for (const auto& item : v) {
      try {
        p.push_back(parse_pairing(item.is_string() ? item.get<std::string>() : ""));
      } catch (const std::invalid_argument& e) {
        r.fail("link", "pairs", std::string(": ") + e.what());
      }
    }
    cfg.pairings = p;
  });
  r.get_uint("link", "n_blocks", cfg.n_blocks, 1);

  r.with("sweep", "snr", [&](const json& v) {
    try {
      if (v.is_string()) {
        cfg.snr_db = parse_snr_range(v.get<std::string>());
      } else if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
        cfg.snr_db = snr_range(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
      } else {
        r.fail("sweep", "snr", "must be \"start:step:stop\" or [start, step, stop]");
      }
    } catch (const std::invalid_argument& e) {
      r.fail("sweep", "snr", std::string(": ") + e.what());
    }
  });
  r.get_uint("sweep", "min_errors", cfg.sweep.min_errors);
  r.get_u64("sweep", "min_bits", cfg.sweep.min_bits);
  r.get_u64("sweep", "max_bits", cfg.sweep.max_bits);
  r.get_uint("sweep", "min_trials", cfg.sweep.min_trials, 1);
  r.get_uint("sweep", "chunk_trials", cfg.sweep.chunk_trials, 1);
  r.get_uint("sweep", "threads", cfg.sweep.threads);

  r.get_uint("papr", "blocks", cfg.papr_blocks, 1);
  r.get_uint("papr", "oversample", cfg.oversample, 1);
  r.get_double("papr", "probability", cfg.ccdf_probability);
  if (cfg.ccdf_probability <= 0.0 || cfg.ccdf_probability >= 1.0) {
    r.fail("papr", "probability", "must lie in (0, 1)");
  }
  r.get_uint("mse", "blocks", cfg.mse_blocks, 1);
  r.reject_unknown();
}

void finalize_config(ExperimentConfig& cfg) {
  Numerology& n = cfg.numerology;
  ValidationReport structure = validate_numerology(n, 0);
  if (!structure.structure_ok) throw ConfigError("numerology: " + structure.failures.front());
  if (cfg.channel.kind == ChannelSpec::Kind::fixed) {
    if (cfg.channel_file.empty()) throw ConfigError("channel.kind = \"file\" needs channel.file");
    try {
      cfg.channel.taps = read_channel_csv(cfg.channel_file).taps;
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
  }
  const std::size_t memory = cfg.channel.kind == ChannelSpec::Kind::awgn ? 0
                             : cfg.channel.kind == ChannelSpec::Kind::tdl ? cfg.channel.memory
                                                                          : cfg.channel.taps.size() - 1;
  try {
    if (cfg.n_t_auto) n.n_t = aligned_tx_offset(n);
    if (cfg.n_g_auto) n.n_g = default_guard(n, memory);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("numerology: ") + e.what());
  }
  if (cfg.extension_bins * 2 > n.m || n.m + 2 * cfg.extension_bins > n.n()) {
    throw ConfigError("waveform.extension_bins = " + std::to_string(cfg.extension_bins) +
                      " does not fit the numerology");
  }
  if (cfg.n_cp > n.n()) throw ConfigError("waveform.n_cp exceeds N");
  if (cfg.sweep.max_bits < cfg.sweep.min_bits) throw ConfigError("sweep.max_bits is below sweep.min_bits");
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["out"] = out;
  const Numerology& n = numerology;
  j["numerology"] = {{"m", n.m},     {"m_s", n.m_s}, {"m_h", n.m_h}, {"a", n.a},   {"b", n.b},
                     {"l_tx", n.l_tx}, {"l_rx", n.l_rx}, {"n_g", n.n_g}, {"n_t", n.n_t}};
  j["waveform"] = {{"modulation", to_string(modulation)},
                   {"rolloff", rolloff},
                   {"extension_bins", extension_bins},
                   {"n_cp", n_cp == 0 ? default_cp_length(n) : n_cp}};
  std::string kind = channel.kind == ChannelSpec::Kind::awgn ? "awgn"
                     : channel.kind == ChannelSpec::Kind::tdl ? "tdl"
                                                              : "file";
  j["channel"] = {{"kind", kind}, {"taps", channel.memory}, {"decay_db", channel.decay_db_per_tap}};
  if (!channel_file.empty()) j["channel"]["file"] = channel_file;
  if (!unique_word_file.empty()) j["unique_word_file"] = unique_word_file;
  json pairs = json::array();
  for (const auto& p : pairings) pairs.push_back(p.name());
  j["link"] = {{"pairs", pairs}, {"n_blocks", n_blocks}};
  j["sweep"] = {{"snr", snr_db},
                {"min_errors", sweep.min_errors},
                {"min_bits", sweep.min_bits},
                {"max_bits", sweep.max_bits},
                {"min_trials", sweep.min_trials},
                {"chunk_trials", sweep.chunk_trials}};
  j["papr"] = {{"blocks", papr_blocks}, {"oversample", oversample}, {"probability", ccdf_probability}};
  j["mse"] = {{"blocks", mse_blocks}};
  return j;
}

}  // namespace scuw
