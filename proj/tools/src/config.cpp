#include "config.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "monotone/errors.hpp"
#include "monotone/exact.hpp"

namespace monotone::cli {
namespace {

Json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    Json j = Json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    Json j = Json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* v = node.as_string()) return Json(v->get());
  if (const auto* v = node.as_integer()) return Json(v->get());
  if (const auto* v = node.as_floating_point()) return Json(v->get());
  if (const auto* v = node.as_boolean()) return Json(v->get());
  throw ConfigError("unsupported TOML value (dates and times are not accepted)");
}

template <typename T>
T required(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(where + ": '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional(const Json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return required<T>(j, key, where);
}

std::vector<double> number_list(const Json& j, const char* key, const std::string& where) {
  return required<std::vector<double>>(j, key, where);
}

IntegerLaw integer_law(const Json& j, const char* key, const std::string& where) {
  IntegerLaw law;
  for (const auto& pair : required<std::vector<std::vector<double>>>(j, key, where)) {
    if (pair.size() != 2) throw ConfigError(where + ": '" + key + "' entries are [value, prob]");
    if (pair[0] != std::floor(pair[0]))
      throw ConfigError(where + ": increments must be integers");
    law.emplace_back(static_cast<long>(pair[0]), pair[1]);
  }
  return law;
}

JumpLaw jump_law(const Json& j, const std::string& where) {
  JumpLaw law;
  if (!j.contains("jumps")) return law;
  for (const auto& pair : required<std::vector<std::vector<double>>>(j, "jumps", where)) {
    if (pair.size() != 2) throw ConfigError(where + ": 'jumps' entries are [size, prob]");
    law.emplace_back(pair[0], pair[1]);
  }
  return law;
}

OrderedStateSpace grid_from(const Json& j, const std::string& where) {
  const Json g = j.contains("grid") ? j.at("grid") : Json();
  if (!g.is_object()) throw ConfigError(where + ": 'grid' must be {lo, hi, count}");
  const auto count = required<std::size_t>(g, "count", where + ".grid");
  return OrderedStateSpace::uniform(required<double>(g, "lo", where + ".grid"),
                                    required<double>(g, "hi", where + ".grid"), count);
}

const std::vector<double>& table_values(const Json& spec, const OrderedStateSpace& grid,
                                        std::vector<double>& store, const std::string& where) {
  store = required<std::vector<double>>(spec, "values", where);
  if (store.size() != grid.size())
    throw ConfigError(where + ": table needs one value per grid state (" +
                      std::to_string(grid.size()) + ")");
  return store;
}

std::string name_of(const Json& spec, const std::string& where) {
  if (spec.is_string()) return spec.get<std::string>();
  if (spec.is_object() && spec.contains("name") && spec.at("name").is_string())
    return spec.at("name").get<std::string>();
  throw ConfigError(where + ": expected a name or a table with 'name'");
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Json read_config_document(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  if (ext == ".toml") {
    try {
      return toml_to_json(toml::parse_file(path.string()));
    } catch (const toml::parse_error& e) {
      throw ConfigError(path.string() + ": " + std::string(e.description()));
    }
  }
  if (ext == ".json") {
    try {
      return Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  throw ConfigError("config must end in .toml or .json: " + path.string());
}

RunConfig parse_run_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a table/object");
  static const char* known[] = {"analysis", "model", "functions", "init", "curve",
                                "simulate", "horizon", "seed", "tol", "output"};
  for (const auto& [k, v] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw ConfigError("unknown config key '" + k + "'");
  }
  RunConfig cfg;
  cfg.analysis = required<std::string>(doc, "analysis", "config");
  if (cfg.analysis != "check" && cfg.analysis != "curve" && cfg.analysis != "simulate" &&
      cfg.analysis != "counterexample")
    throw ConfigError("unknown analysis '" + cfg.analysis + "'");
  if (doc.contains("model")) cfg.model = doc.at("model");
  if (cfg.analysis != "counterexample" && !cfg.model.is_object())
    throw ConfigError("config: missing [model] table");
  cfg.functions = doc.value("functions", Json::object());
  cfg.init = doc.value("init", Json("stationary"));
  cfg.curve = doc.value("curve", Json::object());
  cfg.simulate = doc.value("simulate", Json::object());
  const auto horizon = optional<long long>(doc, "horizon", 32, "config");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  cfg.horizon = static_cast<std::size_t>(horizon);
  cfg.seed = optional<std::uint64_t>(doc, "seed", 0, "config");
  if (doc.contains("tol")) cfg.tol = required<double>(doc, "tol", "config");
  const Json out = doc.value("output", Json::object());
  cfg.out_path = optional<std::string>(out, "path", "", "output");
  cfg.format = optional<std::string>(out, "format", "csv", "output");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("output format must be csv or json");
  return cfg;
}

Json effective_config(const RunConfig& cfg) {
  Json j;
  j["analysis"] = cfg.analysis;
  j["model"] = cfg.model;
  j["functions"] = cfg.functions;
  j["init"] = cfg.init;
  j["curve"] = cfg.curve;
  j["simulate"] = cfg.simulate;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol ? Json(*cfg.tol) : Json(nullptr);
  j["format"] = cfg.format;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(effective_config(cfg).dump())));
  return buf;
}

ModelKernel build_model(const Json& model) {
  const std::string name = required<std::string>(model, "name", "model");
  const std::string where = "model " + name;
  try {
    if (name == "reflected_walk")
      return reflected_walk(integer_law(model, "increments", where),
                            required<long>(model, "max_state", where));
    if (name == "two_sided_reflected_walk")
      return two_sided_reflected_walk(integer_law(model, "increments", where),
                                      required<long>(model, "b", where));
    if (name == "state_dependent_walk")
      return state_dependent_walk({number_list(model, "p", where), number_list(model, "q", where),
                                   number_list(model, "r", where)});
    if (name == "birth_death_skeleton") {
      BirthDeathSpec spec{number_list(model, "lambdas", where), number_list(model, "mus", where),
                          optional<std::string>(model, "truncation_note", "", where)};
      double t = optional<double>(model, "t", 0.0, where);
      if (t == 0.0) {
        // Default step keeps ||Q t||_inf <= 0.1.
        double exit = 0.0;
        for (std::size_t i = 0; i < spec.lambdas.size() && i < spec.mus.size(); ++i)
          exit = std::max(exit, (i + 1 < spec.lambdas.size() ? spec.lambdas[i] : 0.0) +
                                    spec.mus[i]);
        t = exit > 0.0 ? 0.1 / (2.0 * exit) : 1.0;
      }
      return birth_death_skeleton(spec, t, optional<double>(model, "trunc_tol", 1e-12, where));
    }
    if (name == "shot_noise_skeleton")
      return shot_noise_skeleton(required<double>(model, "r", where), jump_law(model, where),
                                 optional<double>(model, "jump_rate", 0.0, where),
                                 required<double>(model, "dt", where), grid_from(model, where));
    if (name == "dam_skeleton") {
      const auto grid = grid_from(model, where);
      const Json release = model.value("release", Json());
      const std::string kind = name_of(release, where + ".release");
      std::function<double(double)> fn;
      if (kind == "linear") {
        const double rate = required<double>(release, "rate", where + ".release");
        fn = [rate](double x) { return rate * x; };
      } else if (kind == "table") {
        std::vector<double> store;
        table_values(release, grid, store, where + ".release");
        fn = [grid, store](double x) { return store[grid.index_of(x)]; };
      } else {
        throw ConfigError(where + ": release must be linear or table");
      }
      return dam_skeleton(fn, jump_law(model, where),
                          optional<double>(model, "jump_rate", 0.0, where),
                          required<double>(model, "dt", where), grid);
    }
    if (name == "absorbed_poisson")
      return absorbed_poisson(required<long>(model, "k", where), required<long>(model, "m", where),
                              required<double>(model, "lambda", where),
                              required<double>(model, "dt", where),
                              optional<double>(model, "t_max", 8.0, where));
    if (name == "constant") {
      if (model.contains("states"))
        return constant_model(OrderedStateSpace(number_list(model, "states", where)));
      return constant_model(OrderedStateSpace::integers(required<long>(model, "lo", where),
                                                        required<long>(model, "hi", where)));
    }
    if (name == "kernel") {
      ModelKernel m("kernel", kernel_from_json(model));
      m.note = "explicit kernel: no predicted verdicts";
      return m;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("unknown model '" + name + "'");
}

ScalarFn resolve_scalar(const Json& spec, const OrderedStateSpace& grid) {
  const std::string name = name_of(spec, "function");
  if (name == "id" || name == "identity") return [](double x) { return x; };
  if (name == "square") return [](double x) { return x * x; };
  if (name == "power") {
    const double p = required<double>(spec, "exponent", "function power");
    return [p](double x) { return std::pow(x, p); };
  }
  if (name == "step") {
    const double c = required<double>(spec, "threshold", "function step");
    return [c](double x) { return x >= c ? 1.0 : 0.0; };
  }
  if (name == "table") {
    std::vector<double> store;
    table_values(spec, grid, store, "function table");
    return [grid, store](double x) { return store[grid.index_of(x)]; };
  }
  throw ConfigError("unknown function '" + name + "'");
}

BivariateFn resolve_bivariate(const Json& spec, const OrderedStateSpace& grid) {
  const std::string name = name_of(spec, "h");
  if (name == "product" && !(spec.is_object() && spec.contains("f1")))
    return [](double x, double y) { return x * y; };
  if (name == "product") {
    auto f1 = resolve_scalar(spec.at("f1"), grid);
    auto f2 = resolve_scalar(spec.value("f2", Json("id")), grid);
    return [f1, f2](double x, double y) { return f1(x) * f2(y); };
  }
  if (name == "min") return [](double x, double y) { return std::min(x, y); };
  if (name == "table") {
    const auto rows = required<std::vector<std::vector<double>>>(spec, "values", "h table");
    if (rows.size() != grid.size())
      throw ConfigError("h table needs one row per grid state");
    for (const auto& r : rows)
      if (r.size() != grid.size()) throw ConfigError("h table needs one column per grid state");
    return [grid, rows](double x, double y) { return rows[grid.index_of(x)][grid.index_of(y)]; };
  }
  throw ConfigError("unknown h '" + name + "'");
}

Distribution resolve_init(const Json& spec, const FiniteKernel& kernel) {
  const auto& space = kernel.shared_space();
  const std::string kind = spec.is_string() ? spec.get<std::string>()
                           : spec.is_object() && spec.contains("point") ? "point"
                           : spec.is_object() && spec.contains("table") ? "table"
                                                                        : "";
  if (kind == "stationary") return stationary(kernel);
  if (kind == "uniform")
    return Distribution(space, std::vector<double>(space->size(), 1.0 / static_cast<double>(space->size())));
  if (kind == "point") {
    const auto idx = space->find(required<double>(spec, "point", "init"));
    if (!idx) throw ConfigError("init point is not a grid state");
    return Distribution::point_mass(space, *idx);
  }
  if (kind == "table") {
    auto mass = required<std::vector<double>>(spec, "table", "init");
    try {
      return Distribution(space, std::move(mass));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("init table: ") + e.what());
    }
  }
  throw ConfigError("init must be stationary, uniform, {point = x} or {table = [...]}");
}

}  // namespace monotone::cli
