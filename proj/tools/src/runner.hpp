#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace monotone::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct SummaryRow {
  std::string config;
  std::string model;
  std::string property;
  std::string verdict;  ///< pass | fail | error
  std::string detail;
};

struct Outcome {
  int status = kExitPass;
  std::string artifact;  ///< CSV or JSON text, header included
  std::string report;    ///< human-readable verdicts
  std::vector<SummaryRow> rows;
};

/// Runs one analysis. Throws ConfigError for invalid configurations.
Outcome run(const RunConfig& cfg);

/// Runs every *.toml / *.json in `dir` in filename order. Invalid members
/// produce an error row and do not stop the others. When `out_dir` is
/// nonempty, each member's artifact and the summary are written there.
Outcome run_battery(const std::filesystem::path& dir, const std::string& format,
                    const std::filesystem::path& out_dir);

std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace monotone::cli
