#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "monotone/checks.hpp"
#include "monotone/distribution.hpp"
#include "monotone/models.hpp"
#include "monotone/serialize.hpp"

namespace monotone::cli {

/// Malformed or unresolvable configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string analysis;  ///< check | curve | simulate | counterexample
  Json model;            ///< {"name": ..., parameters...}
  Json functions;        ///< f1, f2, h
  Json init;             ///< "stationary", {"point": x}, "uniform", {"table": [...]}
  Json curve;            ///< curve options (kind, lag, expect)
  Json simulate;         ///< simulation options (kind, n_paths, ...)
  std::size_t horizon = 32;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out_path;
  std::string format = "csv";
};

/// Reads TOML (.toml) or JSON (.json) into a JSON document.
Json read_config_document(const std::filesystem::path& path);

/// Validates the document and fills a RunConfig. Throws ConfigError.
RunConfig parse_run_config(const Json& doc);

/// Canonical JSON of the effective configuration, used for hashing.
Json effective_config(const RunConfig& cfg);

/// FNV-1a over the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Builds the model named in cfg.model. Library errors become ConfigError
/// only when they stem from invalid parameters.
ModelKernel build_model(const Json& model);

ScalarFn resolve_scalar(const Json& spec, const OrderedStateSpace& grid);
BivariateFn resolve_bivariate(const Json& spec, const OrderedStateSpace& grid);

/// Initial law named by cfg.init. "stationary" is the default.
Distribution resolve_init(const Json& spec, const FiniteKernel& kernel);

}  // namespace monotone::cli
