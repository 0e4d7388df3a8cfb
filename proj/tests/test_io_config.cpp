#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scuw/config.hpp"
#include "scuw/csv_io.hpp"
#include "scuw/experiments.hpp"
#include "support.hpp"

using namespace scuw;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("scuw_tests_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

template <typename Fn>
std::string error_of(Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("complex csv round trip is exact") {
  Engine e = make_engine(41);
  const ComplexVector x = testing::random_complex(33, e);
  const fs::path p = scratch_dir() / "x.csv";
  write_complex_csv(p, x);
  CHECK(read_complex_csv(p) == x);
  const ChannelRealization h{x};
  write_channel_csv(p, h);
  CHECK(read_channel_csv(p).taps == x);
}

TEST_CASE("csv errors name the file and line") {
  const fs::path p = scratch_dir() / "bad.csv";
  write_text(p, "index,real,imag\n# note\n0,1,0\n1,abc,0\n");
  CHECK(error_of([&] { read_complex_csv(p); }).find("bad.csv:4") != std::string::npos);
  write_text(p, "0,1,0\n2,1,0\n");
  CHECK(error_of([&] { read_complex_csv(p); }).find("bad.csv:2") != std::string::npos);
  write_text(p, "");
  CHECK_THROWS(read_complex_csv(p));
}

TEST_CASE("unique word from csv") {
  const UniqueWord uw = default_unique_word();
  const fs::path p = scratch_dir() / "uw.csv";
  write_complex_csv(p, uw.symbols);
  const UniqueWord back = read_unique_word_csv(p, 9);
  CHECK(back.symbols == uw.symbols);
  CHECK(back.m_t == 55);
}

TEST_CASE("raw iq round trip") {
  Engine e = make_engine(42);
  const ComplexVector x = testing::random_complex(17, e);
  const fs::path p = scratch_dir() / "x.iq";
  write_iq_raw(p, x);
  CHECK(fs::file_size(p) == 17 * 16);
  CHECK(read_iq_raw(p) == x);
  std::ofstream(p, std::ios::app) << "x";
  CHECK_THROWS(read_iq_raw(p));
}

TEST_CASE("json config with line-precise errors") {
  ExperimentConfig cfg = default_config("ber-awgn");
  const ConfigDocument doc = parse_json_config(
      "{\n  \"seed\": 7,\n  \"waveform\": {\"modulation\": \"16qam\"},\n  \"sweep\": {\"snr\": \"0:2:8\"}\n}",
      "t.json");
  apply_config(cfg, doc);
  CHECK(cfg.seed == 7);
  CHECK(cfg.modulation == Modulation::qam16);
  CHECK(cfg.snr_db.size() == 5);

  ExperimentConfig c2 = default_config("ber-awgn");
  const std::string err = error_of([&] {
    apply_config(c2, parse_json_config("{\n\"seed\": 1,\n\"waveform\": {\n  \"rolof\": 0.2\n}\n}", "t.json"));
  });
  CHECK(err.find("t.json:4") != std::string::npos);
  CHECK(err.find("waveform.rolof") != std::string::npos);
  CHECK(error_of([] { parse_json_config("{\n\"a\": 1,\n}", "t.json"); }).find("t.json:") != std::string::npos);
  ExperimentConfig c3 = default_config("ber-awgn");
  CHECK(error_of([&] {
          apply_config(c3, parse_json_config("{\"waveform\": {\"rolloff\": 2}}", "t.json"));
        }).find("rolloff") != std::string::npos);
}

TEST_CASE("toml config subset") {
  ExperimentConfig cfg = default_config("ber-fading");
  const ConfigDocument doc = parse_toml_config(
      "# fading run\nseed = 9\n\n[channel]\nkind = \"tdl\"\ntaps = 12\n\n[link]\npairs = [\"sc-sc\", \"uw-uw\"]\n"
      "\n[sweep]\nsnr = [10, 2, 20]\n",
      "t.toml");
  apply_config(cfg, doc);
  CHECK(cfg.seed == 9);
  CHECK(cfg.channel.memory == 12);
  CHECK(cfg.pairings.size() == 2);
  CHECK(cfg.snr_db.size() == 6);
  finalize_config(cfg);
  CHECK(cfg.numerology.n_t == 99);
  CHECK(cfg.numerology.n_g == default_guard(cfg.numerology, 12));

  ExperimentConfig c2 = default_config("ber-fading");
  const std::string err =
      error_of([&] { apply_config(c2, parse_toml_config("seed = 1\n[channel]\ntaps = -3\n", "t.toml")); });
  CHECK(err.find("t.toml:3") != std::string::npos);
  CHECK_THROWS_AS(parse_toml_config("[channel\n", "t.toml"), ConfigError);
  CHECK_THROWS_AS(parse_toml_config("seed = 1\nseed = 2\n", "t.toml"), ConfigError);
}

TEST_CASE("finalize rejects infeasible settings") {
  ExperimentConfig cfg = default_config("ber-fading");
  cfg.channel.memory = 40;
  CHECK_THROWS_AS(finalize_config(cfg), ConfigError);
  ExperimentConfig c2 = default_config("papr");
  c2.extension_bins = 200;
  CHECK_THROWS_AS(finalize_config(c2), ConfigError);
  CHECK_THROWS_AS(default_config("fig7"), ConfigError);
  CHECK_THROWS(parse_snr_range("0:1"));
  CHECK_THROWS(parse_pairing("scsc"));
}

TEST_CASE("experiments are deterministic") {
  const fs::path dir = scratch_dir();
  ExperimentConfig cfg = default_config("ber-awgn");
  cfg.pairings = {parse_pairing("sc-sc"), parse_pairing("uw-uw")};
  cfg.snr_db = {2.0, 4.0};
  cfg.sweep.min_bits = 20000;
  cfg.sweep.min_errors = 20;
  cfg.out = (dir / "a").string();
  finalize_config(cfg);
  const ExperimentOutput a = run_experiment(cfg);
  cfg.out = (dir / "b").string();
  cfg.sweep.threads = 2;
  const ExperimentOutput b = run_experiment(cfg);
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(slurp(a.csv).rfind("curve,snr_db,ebn0_db,ber,bits,errors,std_error,upper_95\n", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(a.manifest));
  CHECK(manifest["schema_version"] == kManifestSchemaVersion);
  CHECK(manifest["seed"] == 1);
  CHECK(manifest.contains("git_describe"));
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest["config"]["experiment"] == "ber-awgn");
}

TEST_CASE("waveform-mse experiment writes one row near the expected level") {
  ExperimentConfig cfg = default_config("waveform-mse");
  cfg.out = (scratch_dir() / "mse").string();
  finalize_config(cfg);
  const ExperimentOutput o = run_experiment(cfg);
  const std::string text = slurp(o.csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(o.summary["mse_db_sc_vs_uw"].get<double>() == doctest::Approx(-20.06).epsilon(0.01));
}
