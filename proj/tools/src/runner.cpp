#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "monotone/coupling.hpp"
#include "monotone/errors.hpp"
#include "monotone/exact.hpp"

#ifndef MONOTONE_VERSION
#define MONOTONE_VERSION "0.0.0"
#endif

namespace monotone::cli {
namespace {

struct Context {
  const RunConfig& cfg;
  std::string hash;
  Outcome out;

  void row(const std::string& model, const std::string& property, bool pass,
           std::string detail = {}) {
    out.rows.push_back({"", model, property, pass ? "pass" : "fail", std::move(detail)});
    if (!pass) out.status = kExitFail;
  }

  std::string csv_header() const {
    return "# monotone " MONOTONE_VERSION "\n# config fnv1a:" + hash + "\n# seed " +
           std::to_string(cfg.seed) + "\n";
  }
  Json json_header() const {
    return {{"tool", "monotone"},
            {"version", MONOTONE_VERSION},
            {"config_hash", "fnv1a:" + hash},
            {"seed", cfg.seed}};
  }
};

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tol.value_or(fallback); }

Json model_json(const ModelKernel& m) {
  return {{"name", m.name},
          {"states", m.kernel.size()},
          {"time_step", m.kernel.time_step()},
          {"predicted", {{"stoch_monotone", m.predicted_monotone},
                         {"condition1", m.predicted_condition1}}},
          {"truncation_mass", m.truncation_mass},
          {"note", m.note}};
}

std::string fn_name(const Json& spec) {
  if (spec.is_string()) return spec.get<std::string>();
  if (spec.is_object() && spec.contains("name")) return spec.at("name").get<std::string>();
  return "?";
}

bool nondecreasing_on(const ScalarFn& f, const OrderedStateSpace& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (f(grid[i]) < f(grid[i - 1])) return false;
  return true;
}

std::string check_csv_row(const std::string& method, const CheckReport& r) {
  std::string s = to_string(r.property) + "," + method + "," + (r.passed ? "true" : "false") +
                  "," + format_number(r.tolerance);
  if (r.witness)
    s += "," + format_number(r.witness->x1) + "," + format_number(r.witness->x2) + "," +
         format_number(r.witness->threshold) + "," + format_number(r.witness->gap);
  else
    s += ",,,,";
  return s + "\n";
}

void run_check(Context& ctx) {
  const auto model = build_model(ctx.cfg.model);
  const double tol = tol_or(ctx.cfg, kDefaultCheckTol);
  const auto& k = model.kernel;
  std::vector<std::pair<std::string, CheckReport>> reports{
      {"tail", check_stoch_monotone(k, tol)}, {"tail", check_condition1(k, tol)}};
  const auto g = check_ginv_monotone(k, tol);
  reports.emplace_back("ginv", g.monotone);
  reports.emplace_back("ginv", g.condition1);
  if (ctx.cfg.functions.contains("h")) {
    const auto h = resolve_bivariate(ctx.cfg.functions.at("h"), k.space());
    reports.emplace_back("grid", check_supermodular(h, k.space().states(), k.space().states(), tol));
  }

  Json list = Json::array();
  std::string csv = ctx.csv_header() + "property,method,passed,tolerance,x1,x2,threshold,gap\n";
  for (const auto& [method, r] : reports) {
    Json j = to_json(r);
    j["method"] = method;
    list.push_back(j);
    csv += check_csv_row(method, r);
    ctx.out.report += render_report(r);
  }
  // One summary row per property; the generalized-inverse verdict must agree.
  const auto summarize = [&](const CheckReport& tail, const CheckReport& ginv, bool predicted) {
    std::string detail = tail.passed == ginv.passed ? "tail and ginv agree"
                                                    : "tail and ginv DISAGREE";
    if (model.name != "kernel")
      detail += std::string("; predicted ") + (predicted ? "pass" : "fail");
    if (tail.witness) detail += "; gap " + format_number(tail.witness->gap);
    ctx.row(model.name, to_string(tail.property), tail.passed && tail.passed == ginv.passed,
            detail);
  };
  summarize(reports[0].second, g.monotone, model.predicted_monotone);
  summarize(reports[1].second, g.condition1, model.predicted_condition1);
  if (reports.size() > 4) ctx.row(model.name, "supermodular", reports[4].second.passed);
  if (ctx.cfg.format == "json")
    ctx.out.artifact = Json{{"header", ctx.json_header()},
                            {"model", model_json(model)},
                            {"reports", list}}
                           .dump(2) +
                       "\n";
  else
    ctx.out.artifact = std::move(csv);
}

struct ShapeClaims {
  std::vector<std::string> flags;
  std::string reason;
};

bool flag_value(const ShapeCertificate& c, const std::string& flag) {
  if (flag == "nonnegative") return c.nonnegative;
  if (flag == "nonincreasing") return c.nonincreasing;
  if (flag == "nondecreasing") return c.nondecreasing;
  if (flag == "convex") return c.convex;
  if (flag == "concave") return c.concave;
  throw ConfigError("unknown shape flag '" + flag + "'");
}

// Shapes the theory implies for a stationary curve, or none with a reason.
ShapeClaims stationary_claims(const std::string& kind, const ModelKernel& model,
                              const Distribution& init, const RunConfig& cfg) {
  const auto& k = model.kernel;
  if (!init.unique() && cfg.init.is_string() && cfg.init.get<std::string>() == "stationary")
    return {{}, "stationary law is not unique; give an explicit invariant init"};
  if (init.invariance_residual(k) > 1e-10) return {{}, "init is not invariant"};
  if (!check_stoch_monotone(k).passed) return {{}, "kernel is not stochastically monotone"};
  const bool c1 = check_condition1(k).passed;
  const auto& grid = k.space();
  if (kind == "covariance") {
    const Json f1 = cfg.functions.value("f1", Json("id"));
    const Json f2 = cfg.functions.value("f2", Json("id"));
    if (!nondecreasing_on(resolve_scalar(f1, grid), grid) ||
        !nondecreasing_on(resolve_scalar(f2, grid), grid))
      return {{}, "f1 or f2 is not nondecreasing"};
    ShapeClaims c{{"nonnegative", "nonincreasing"}, ""};
    const std::string n2 = fn_name(f2);
    if (c1 && (n2 == "id" || n2 == "identity")) c.flags.push_back("convex");
    return c;
  }
  const auto h = resolve_bivariate(cfg.functions.value("h", Json("product")), grid);
  if (kind == "supermod") {
    if (!check_supermodular(h, grid.states(), grid.states()).passed)
      return {{}, "h is not supermodular on the grid"};
    return {{"nonincreasing"}, ""};
  }
  if (kind == "difference") {
    if (!c1) return {{}, "kernel fails Condition 1"};
    return {{"nonincreasing"}, "h must be supermodular on all real pairs; not verified"};
  }
  return {{}, ""};
}

std::pair<Curve, ShapeClaims> exact_curve(const RunConfig& cfg, const ModelKernel& model) {
  const auto& k = model.kernel;
  const auto& grid = k.space();
  const std::string kind = cfg.curve.value("kind", std::string("covariance"));
  const std::size_t t_max = cfg.horizon;
  if (kind == "transient_mean" || kind == "transient_variance") {
    const double x0 = cfg.curve.value("x0", grid.front());
    try {
      if (kind == "transient_mean") {
        ShapeClaims c{{"nondecreasing"}, ""};
        if (check_condition1(k).passed) c.flags.push_back("concave");
        return {transient_mean_curve(k, x0, t_max), c};
      }
      return {transient_variance_curve(k, x0, t_max), {{}, "no shape is implied"}};
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  const Distribution init = resolve_init(cfg.init, k);
  if (kind == "covariance") {
    const auto f1 = resolve_scalar(cfg.functions.value("f1", Json("id")), grid);
    const auto f2 = resolve_scalar(cfg.functions.value("f2", Json("id")), grid);
    return {covariance_curve(k, init, f1, f2, t_max), stationary_claims(kind, model, init, cfg)};
  }
  if (kind == "supermod") {
    const auto h = resolve_bivariate(cfg.functions.value("h", Json("product")), grid);
    return {supermod_curve(k, init, h, t_max), stationary_claims(kind, model, init, cfg)};
  }
  if (kind == "difference") {
    const auto h = resolve_bivariate(cfg.functions.value("h", Json("product")), grid);
    const auto lag = cfg.curve.value("lag", std::size_t{1});
    if (lag < 1) throw ConfigError("curve lag must be >= 1");
    return {difference_curve(k, init, h, lag, t_max), stationary_claims(kind, model, init, cfg)};
  }
  throw ConfigError("unknown curve kind '" + kind + "'");
}

void run_curve(Context& ctx) {
  const auto model = build_model(ctx.cfg.model);
  auto [curve, claims] = exact_curve(ctx.cfg, model);
  if (ctx.cfg.curve.contains("expect")) {
    claims.flags = ctx.cfg.curve.at("expect").get<std::vector<std::string>>();
    claims.reason = "expectations from config";
  }
  const auto cert = certify_shape(curve, tol_or(ctx.cfg, 1e-10));
  const std::string kind = ctx.cfg.curve.value("kind", std::string("covariance"));
  for (const auto& f : claims.flags) ctx.row(model.name, kind + ":" + f, flag_value(cert, f));
  if (claims.flags.empty()) ctx.out.rows.push_back({"", model.name, kind + ":claims", "pass",
                                                    "no claims: " + claims.reason});
  ctx.out.report = render_certificate(cert);
  if (!claims.reason.empty()) ctx.out.report += "  claims: " + claims.reason + "\n";

  // Optional second certificate at half the time step. Agreement between the
  // two grids is reported, not taken as proof of the continuous-time shape.
  std::optional<std::pair<Curve, ShapeCertificate>> refined;
  if (ctx.cfg.curve.value("refine", false)) {
    const std::string key = model.name == "birth_death_skeleton" ? "t" : "dt";
    if (model.name != "birth_death_skeleton" && model.name != "shot_noise_skeleton" &&
        model.name != "dam_skeleton" && model.name != "absorbed_poisson")
      throw ConfigError("curve.refine needs a model with a physical time step");
    RunConfig half = ctx.cfg;
    half.model[key] = model.kernel.time_step() / 2.0;
    half.horizon = 2 * ctx.cfg.horizon;
    const auto fine_model = build_model(half.model);
    auto fine = exact_curve(half, fine_model).first;
    const auto fine_cert = certify_shape(fine, tol_or(ctx.cfg, 1e-10));
    double gap = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i)
      gap = std::max(gap, std::abs(curve.values[i] - fine.values[2 * i]));
    for (const auto& f : claims.flags)
      ctx.row(model.name, kind + ":" + f + ":refined", flag_value(fine_cert, f),
              "time step " + format_number(fine_model.kernel.time_step()) +
                  "; max gap to coarse samples " + format_number(gap));
    ctx.out.report += "refined (time step " + format_number(fine_model.kernel.time_step()) +
                      "):\n" + render_certificate(fine_cert);
    refined.emplace(std::move(fine), fine_cert);
  }

  if (ctx.cfg.format == "json") {
    Json j = curve_to_json(curve, cert);
    j["expected"] = claims.flags;
    j["claims_note"] = claims.reason;
    Json doc{{"header", ctx.json_header()}, {"model", model_json(model)}, {"curve", j}};
    if (refined) doc["refined"] = curve_to_json(refined->first, refined->second);
    ctx.out.artifact = doc.dump(2) + "\n";
  } else {
    ctx.out.artifact = ctx.csv_header() + curve_to_csv(curve);
    if (refined)
      ctx.out.artifact += "# refined at half the time step\n" + curve_to_csv(refined->first);
  }
}

void run_simulate(Context& ctx) {
  const auto model = build_model(ctx.cfg.model);
  const auto& k = model.kernel;
  const auto& grid = k.space();
  const auto& sim = ctx.cfg.simulate;
  const std::string kind = sim.value("kind", std::string("supermod"));
  const std::size_t t_max = ctx.cfg.horizon;
  const std::uint64_t seed = ctx.cfg.seed;

  if (kind == "coupled") {
    std::vector<double> starts = sim.value("initial_states", std::vector<double>{});
    if (starts.empty()) starts = {grid.front(), grid.back()};
    std::sort(starts.begin(), starts.end());
    for (double x : starts)
      if (!grid.find(x)) throw ConfigError("initial state " + format_number(x) + " is off-grid");
    const auto steps = sim.value("steps", t_max);
    const auto paths = simulate_coupled(k, starts, steps, seed);
    const std::size_t order = paths.ordering_violations();
    const std::size_t incr = paths.increment_violations(grid.difference_slack());
    if (check_stoch_monotone(k).passed)
      ctx.row(model.name, "coupling:ordering", order == 0, std::to_string(order) + " violations");
    if (check_condition1(k).passed)
      ctx.row(model.name, "coupling:increments", incr == 0, std::to_string(incr) + " violations");
    ctx.out.report = "ordering violations " + std::to_string(order) +
                     ", increment violations " + std::to_string(incr) + "\n";
    if (ctx.cfg.format == "json") {
      ctx.out.artifact = Json{{"header", ctx.json_header()},
                              {"model", model_json(model)},
                              {"initial_states", paths.initial_states},
                              {"trajectories", paths.trajectories},
                              {"ordering_violations", order},
                              {"increment_violations", incr}}
                             .dump(2) +
                         "\n";
    } else {
      std::string csv = ctx.csv_header() + "t";
      for (double x : starts) csv += ",x=" + format_number(x);
      csv += "\n";
      for (std::size_t t = 0; t <= steps; ++t) {
        csv += std::to_string(t);
        for (const auto& tr : paths.trajectories) csv += "," + format_number(tr[t]);
        csv += "\n";
      }
      ctx.out.artifact = std::move(csv);
    }
    return;
  }

  const auto n_paths = sim.value("n_paths", std::size_t{10000});
  if (n_paths < 2) throw ConfigError("n_paths must be >= 2");
  const Distribution init = resolve_init(ctx.cfg.init, k);
  std::vector<Estimate> est;
  std::optional<Curve> exact;
  const bool compare = sim.value("compare_exact", false);
  if (kind == "supermod") {
    const auto h = resolve_bivariate(ctx.cfg.functions.value("h", Json("product")), grid);
    est = mc_supermod_curve(k, init, h, t_max, n_paths, seed);
    if (compare) exact = supermod_curve(k, init, h, t_max);
  } else if (kind == "covariance" || kind == "autocovariance") {
    const Json id("id");
    const auto f1 = resolve_scalar(kind == "covariance" ? ctx.cfg.functions.value("f1", id) : id, grid);
    const auto f2 = resolve_scalar(kind == "covariance" ? ctx.cfg.functions.value("f2", id) : id, grid);
    est = mc_covariance_curve(k, init, f1, f2, t_max, n_paths, seed);
    if (compare) exact = covariance_curve(k, init, f1, f2, t_max);
  } else if (kind == "difference") {
    const auto h = resolve_bivariate(ctx.cfg.functions.value("h", Json("product")), grid);
    const std::size_t lag = sim.value("lag", std::size_t{1});
    if (lag < 1) throw ConfigError("simulate lag must be >= 1");
    const BivariateFn hs[] = {h};
    const std::size_t lags[] = {lag};
    est = std::move(mc_difference_curves(k, init, hs, lags, t_max, n_paths, seed).front());
    if (compare) exact = difference_curve(k, init, h, lag, t_max);
  } else {
    throw ConfigError("unknown simulate kind '" + kind + "'");
  }

  std::vector<double> times(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) times[t] = static_cast<double>(t) * k.time_step();
  if (exact) {
    std::size_t outside = 0;
    for (std::size_t t = 0; t <= t_max; ++t) {
      const double diff = std::abs(est[t].value - exact->values[t]);
      if (diff > 4.0 * est[t].std_error + 1e-9 * (1.0 + std::abs(exact->values[t]))) ++outside;
    }
    ctx.row(model.name, kind + ":mc-vs-exact", outside == 0,
            std::to_string(outside) + " points beyond 4 SE");
  }
  ctx.out.report = kind + ": " + std::to_string(est.size()) + " estimates from " +
                   std::to_string(n_paths) + " paths\n";
  if (ctx.cfg.format == "json") {
    Json rows = Json::array();
    for (std::size_t t = 0; t <= t_max; ++t)
      rows.push_back({{"t", times[t]},
                      {"value", est[t].value},
                      {"std_error", est[t].std_error},
                      {"n", est[t].n_samples}});
    ctx.out.artifact = Json{{"header", ctx.json_header()},
                            {"model", model_json(model)},
                            {"estimates", rows}}
                           .dump(2) +
                       "\n";
  } else {
    ctx.out.artifact = ctx.csv_header() + estimates_to_csv(times, est);
  }
}

void run_counterexample(Context& ctx) {
  Json spec = ctx.cfg.model.is_object()
                  ? ctx.cfg.model
                  : Json{{"name", "absorbed_poisson"}, {"k", 0}, {"m", 2}, {"lambda", 1.0},
                         {"dt", 0.25}, {"t_max", 8.0}};
  if (spec.value("name", std::string()) != "absorbed_poisson")
    throw ConfigError("counterexample runs the absorbed_poisson model");
  const auto model = build_model(spec);
  const auto& k = model.kernel;
  const std::size_t steps = model.horizon_steps.value_or(ctx.cfg.horizon);
  if (steps < 2) throw ConfigError("counterexample needs at least two steps");
  const double x0 = k.space().front();
  const auto var = transient_variance_curve(k, x0, steps);
  const auto mean = transient_mean_curve(k, x0, steps);
  const double tol = tol_or(ctx.cfg, 1e-10);
  const auto vc = certify_shape(var, tol);
  const auto mc = certify_shape(mean, tol);
  ctx.row(model.name, "variance:non-monotone", !vc.nonincreasing && !vc.nondecreasing);
  ctx.row(model.name, "mean:nondecreasing", mc.nondecreasing);
  ctx.row(model.name, "mean:concave", mc.concave);
  ctx.out.report = "variance\n" + render_certificate(vc) + "mean\n" + render_certificate(mc);
  if (ctx.cfg.format == "json") {
    ctx.out.artifact = Json{{"header", ctx.json_header()},
                            {"model", model_json(model)},
                            {"variance", curve_to_json(var, vc)},
                            {"mean", curve_to_json(mean, mc)}}
                           .dump(2) +
                       "\n";
  } else {
    ctx.out.artifact = ctx.csv_header() + curve_to_csv(var);
  }
}

}  // namespace

Outcome run(const RunConfig& cfg) {
  Context ctx{cfg, config_hash(cfg), {}};
  try {
    if (cfg.analysis == "check") run_check(ctx);
    else if (cfg.analysis == "curve") run_curve(ctx);
    else if (cfg.analysis == "simulate") run_simulate(ctx);
    else run_counterexample(ctx);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return std::move(ctx.out);
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  const auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out = "config,model,property,verdict,detail\n";
  for (const auto& r : rows)
    out += quote(r.config) + "," + quote(r.model) + "," + quote(r.property) + "," + r.verdict +
           "," + quote(r.detail) + "\n";
  return out;
}

Outcome run_battery(const std::filesystem::path& dir, const std::string& format,
                    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("battery directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".toml" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (!out_dir.empty()) fs::create_directories(out_dir);

  Outcome total;
  bool any_error = false, any_fail = false;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    try {
      RunConfig cfg = parse_run_config(read_config_document(f));
      cfg.format = format;
      Outcome o = run(cfg);
      for (auto& r : o.rows) {
        r.config = name;
        any_fail |= r.verdict == "fail";
        total.rows.push_back(std::move(r));
      }
      if (!out_dir.empty())
        std::ofstream(out_dir / (f.stem().string() + "." + format)) << o.artifact;
    } catch (const std::exception& e) {
      any_error = true;
      std::string model = "?";
      total.rows.push_back({name, model, "-", "error", e.what()});
    }
  }
  total.status = any_error ? kExitConfig : any_fail ? kExitFail : kExitPass;
  if (format == "json") {
    Json rows = Json::array();
    for (const auto& r : total.rows)
      rows.push_back({{"config", r.config},
                      {"model", r.model},
                      {"property", r.property},
                      {"verdict", r.verdict},
                      {"detail", r.detail}});
    total.artifact = Json{{"summary", rows}}.dump(2) + "\n";
  } else {
    total.artifact = summary_to_csv(total.rows);
  }
  std::size_t pass = 0, fail = 0, err = 0;
  for (const auto& r : total.rows) {
    pass += r.verdict == "pass";
    fail += r.verdict == "fail";
    err += r.verdict == "error";
  }
  total.report = std::to_string(files.size()) + " configs: " + std::to_string(pass) + " pass, " +
                 std::to_string(fail) + " fail, " + std::to_string(err) + " error\n";
  if (!out_dir.empty()) std::ofstream(out_dir / ("summary." + format)) << total.artifact;
  return total;
}

}  // namespace monotone::cli
