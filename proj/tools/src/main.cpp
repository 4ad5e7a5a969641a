#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "runner.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<double> tol;
};

void add_common(CLI::App* sub, Options& o, bool needs_config) {
  auto* c = sub->add_option("--config", o.config, "TOML or JSON run configuration");
  if (needs_config) c->required();
  sub->add_option("--seed", o.seed, "64-bit seed (overrides the config)");
  sub->add_option("--out", o.out, "output path (default: stdout)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", o.tol, "check / certificate tolerance");
}

int write_outcome(const monotone::cli::Outcome& outcome, const std::string& path) {
  if (path.empty()) {
    std::cout << outcome.artifact;
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << path << "\n";
      return monotone::cli::kExitConfig;
    }
    f << outcome.artifact;
  }
  std::cerr << outcome.report;
  return outcome.status;
}

int run_single(const std::string& analysis, const Options& o) {
  using namespace monotone::cli;
  using monotone::Json;
  RunConfig cfg;
  if (o.config.empty()) {
    // Only the counterexample has a built-in default model.
    cfg = parse_run_config(Json{{"analysis", analysis}});
  } else {
    Json doc = read_config_document(o.config);
    if (doc.is_object()) doc["analysis"] = analysis;
    cfg = parse_run_config(doc);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) cfg.tol = *o.tol;
  if (!o.format.empty()) cfg.format = o.format;
  const std::string out = o.out.empty() ? cfg.out_path : o.out;
  return write_outcome(run(cfg), out);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace monotone::cli;
  CLI::App app{"Structural checks, exact curves and coupled simulation for monotone Markov kernels"};
  app.set_version_flag("--version", std::string("monotone " MONOTONE_VERSION));
  app.require_subcommand(1);

  Options opts;
  std::string battery_dir;
  for (const char* name : {"check", "curve", "simulate", "counterexample"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, opts, std::string(name) != "counterexample");
  }
  auto* battery = app.add_subcommand("battery", "run every config in a directory");
  battery->add_option("config_dir", battery_dir, "directory of configs");
  battery->add_option("--config", battery_dir, "directory of configs");
  battery->add_option("--out", opts.out, "directory for member artifacts and the summary");
  battery->add_option("--format", opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (sub->get_name() == "battery") {
      if (battery_dir.empty()) throw ConfigError("battery needs a config directory");
      const auto outcome = run_battery(battery_dir, opts.format.empty() ? "csv" : opts.format,
                                       opts.out);
      std::cout << outcome.artifact;
      std::cerr << outcome.report;
      return outcome.status;
    }
    return run_single(sub->get_name(), opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
