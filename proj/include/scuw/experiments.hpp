#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "scuw/config.hpp"
#include "scuw/link.hpp"

namespace scuw {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kCsvSchemaVersion = 1;

struct ExperimentOutput {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  nlohmann::json summary;
};

/// Builds the link scenario of one pairing from a finalized config.
LinkScenario scenario_for(const ExperimentConfig& cfg, const Pairing& pairing);

/// Runs cfg.experiment and writes <out>/<experiment>.csv and
/// <out>/manifest.json. Progress lines go to `log` when given.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Dual-path identity checks (resampling, circulant diagonalization, SC
/// transmitter/receiver DFT forms, real eigenvalues under the alignment
/// condition, UW perfect reconstruction). Prints one PASS/FAIL line each.
bool run_selftest(std::ostream& out);

/// Git revision baked in at build time.
std::string build_git_describe();

}  // namespace scuw
