#include "growthmc/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "growthmc/csv_io.hpp"
#include "growthmc/errors.hpp"
#include "growthmc/montecarlo.hpp"

namespace growthmc {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigError("config: '" + path + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" + path + "." + key + "'");
  }
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing '" + path + "." + key + "'");
  }
  if (!obj[key].is_number())
    throw ConfigError("config: '" + path + "." + key + "' must be a number");
  return obj[key].get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& path,
                      const std::string& key,
                      std::optional<std::uint64_t> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing '" + path + "." + key + "'");
  }
  if (!obj[key].is_number_integer() || obj[key].get<double>() < 0)
    throw ConfigError("config: '" + path + "." + key +
                      "' must be a non-negative integer");
  return obj[key].get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key,
                       std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing '" + path + "." + key + "'");
  }
  if (!obj[key].is_string())
    throw ConfigError("config: '" + path + "." + key + "' must be a string");
  return obj[key].get<std::string>();
}

GrowthModel parse_model(const json& m) {
  const std::string family = get_string(m, "model", "family");
  if (family == "power_drift") {
    reject_unknown(m, "model", {"family", "c", "gamma", "d", "noise"});
    PowerDriftChain chain;
    chain.c = get_number(m, "model", "c");
    chain.gamma = get_number(m, "model", "gamma");
    chain.d = get_number(m, "model", "d");
    const std::string noise =
        get_string(m, "model", "noise", std::string("gaussian"));
    if (noise == "gaussian")
      chain.noise = NoiseKind::GaussianScaled;
    else if (noise == "two_point")
      chain.noise = NoiseKind::TwoPointSymmetric;
    else
      throw ConfigError("config: model.noise must be gaussian or two_point");
    return chain;
  }
  if (family == "bessel") {
    reject_unknown(m, "model", {"family", "delta"});
    return BesselLikeWalk{get_number(m, "model", "delta")};
  }
  if (family == "critical_gwi") {
    reject_unknown(m, "model", {"family", "immigration_mean"});
    return CriticalGwi{get_number(m, "model", "immigration_mean")};
  }
  if (family == "state_dep_gw") {
    reject_unknown(m, "model", {"family", "c", "sigma2"});
    StateDepGw gw;
    gw.c = get_number(m, "model", "c");
    gw.sigma2 = get_number(m, "model", "sigma2");
    return gw;
  }
  if (family == "non_markov_r") {
    reject_unknown(m, "model", {"family", "K"});
    return NonMarkovR{get_number(m, "model", "K")};
  }
  throw ConfigError("config: unknown model.family '" + family + "'");
}

json model_to_json(const GrowthModel& model) {
  json m;
  m["family"] = family_name(model);
  std::visit(
      [&m](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerDriftChain>) {
          m["c"] = v.c;
          m["gamma"] = v.gamma;
          m["d"] = v.d;
          m["noise"] = v.noise == NoiseKind::GaussianScaled ? "gaussian"
                                                            : "two_point";
        } else if constexpr (std::is_same_v<T, BesselLikeWalk>) {
          m["delta"] = v.delta;
        } else if constexpr (std::is_same_v<T, CriticalGwi>) {
          m["immigration_mean"] = v.immigration_mean;
        } else if constexpr (std::is_same_v<T, StateDepGw>) {
          m["c"] = v.c;
          m["sigma2"] = v.sigma2;
        } else if constexpr (std::is_same_v<T, NonMarkovR>) {
          m["K"] = v.K;
        }
      },
      model);
  return m;
}

}  // namespace

bool OutputSection::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

std::vector<std::uint64_t> RunConfig::n_grid() const {
  if (run.grid.kind == "explicit") return run.grid.explicit_grid;
  return geometric_grid(run.grid.n_min, run.horizon, run.grid.points);
}

std::pair<double, double> RunConfig::fit_window() const {
  if (analysis.fit_window) return *analysis.fit_window;
  const double hi = static_cast<double>(run.horizon);
  return {std::max(10.0, hi / 20.0), hi};
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  reject_unknown(doc, "$",
                 {"model", "run", "analysis", "output", "oracle",
                  "drift_check", "transforms"});
  if (!doc.contains("model"))
    throw ConfigError("config: missing 'model' section");

  RunConfig cfg;
  cfg.model = parse_model(doc["model"]);

  if (doc.contains("run")) {
    const json& r = doc["run"];
    reject_unknown(r, "run",
                   {"x0", "A", "horizon", "trajectories", "seed", "grid"});
    cfg.run.x0 = get_number(r, "run", "x0", cfg.run.x0);
    cfg.run.threshold = get_number(r, "run", "A", cfg.run.threshold);
    cfg.run.horizon = get_u64(r, "run", "horizon", cfg.run.horizon);
    cfg.run.trajectories =
        get_u64(r, "run", "trajectories", cfg.run.trajectories);
    cfg.run.seed = get_u64(r, "run", "seed", cfg.run.seed);
    if (r.contains("grid")) {
      const json& g = r["grid"];
      reject_unknown(g, "run.grid", {"kind", "n_min", "points", "values"});
      cfg.run.grid.kind =
          get_string(g, "run.grid", "kind", cfg.run.grid.kind);
      if (cfg.run.grid.kind == "geometric") {
        cfg.run.grid.n_min = get_u64(g, "run.grid", "n_min", cfg.run.grid.n_min);
        cfg.run.grid.points = get_u64(g, "run.grid", "points",
                                      static_cast<std::uint64_t>(
                                          cfg.run.grid.points));
      } else if (cfg.run.grid.kind == "explicit") {
        if (!g.contains("values") || !g["values"].is_array())
          throw ConfigError("config: run.grid.values must be an array");
        for (const auto& v : g["values"])
          cfg.run.grid.explicit_grid.push_back(v.get<std::uint64_t>());
      } else {
        throw ConfigError("config: run.grid.kind must be geometric or explicit");
      }
    }
  }

  if (doc.contains("analysis")) {
    const json& a = doc["analysis"];
    reject_unknown(a, "analysis", {"alpha", "beta", "fit_window"});
    cfg.analysis.alpha = get_number(a, "analysis", "alpha", cfg.analysis.alpha);
    cfg.analysis.beta = get_number(a, "analysis", "beta", cfg.analysis.beta);
    if (a.contains("fit_window")) {
      if (!a["fit_window"].is_array() || a["fit_window"].size() != 2)
        throw ConfigError("config: analysis.fit_window must be [lo, hi]");
      cfg.analysis.fit_window = {a["fit_window"][0].get<double>(),
                                 a["fit_window"][1].get<double>()};
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, "output", {"directory", "formats"});
    cfg.output.directory =
        get_string(o, "output", "directory", cfg.output.directory);
    if (o.contains("formats")) {
      if (!o["formats"].is_array())
        throw ConfigError("config: output.formats must be an array");
      cfg.output.formats.clear();
      for (const auto& f : o["formats"]) {
        const std::string fmt = f.get<std::string>();
        if (fmt != "csv" && fmt != "json" && fmt != "svg")
          throw ConfigError("config: unknown output format '" + fmt + "'");
        cfg.output.formats.push_back(fmt);
      }
    }
  }

  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    reject_unknown(o, "oracle",
                   {"cap", "x0", "n_max", "tol", "boundary", "tv_alpha",
                    "tv_n_min", "export_kernel", "fixture"});
    cfg.oracle.cap = static_cast<std::int32_t>(
        get_u64(o, "oracle", "cap",
                static_cast<std::uint64_t>(cfg.oracle.cap)));
    cfg.oracle.x0 = static_cast<std::int32_t>(
        get_u64(o, "oracle", "x0", static_cast<std::uint64_t>(cfg.oracle.x0)));
    cfg.oracle.n_max = get_u64(o, "oracle", "n_max", cfg.oracle.n_max);
    cfg.oracle.tol = get_number(o, "oracle", "tol", cfg.oracle.tol);
    cfg.oracle.boundary =
        get_string(o, "oracle", "boundary", cfg.oracle.boundary);
    if (cfg.oracle.boundary != "overflow" && cfg.oracle.boundary != "reflect")
      throw ConfigError("config: oracle.boundary must be overflow or reflect");
    cfg.oracle.tv_alpha = get_number(o, "oracle", "tv_alpha", cfg.oracle.tv_alpha);
    cfg.oracle.tv_n_min = get_u64(o, "oracle", "tv_n_min", cfg.oracle.tv_n_min);
    if (o.contains("export_kernel")) {
      if (!o["export_kernel"].is_boolean())
        throw ConfigError("config: oracle.export_kernel must be a boolean");
      cfg.oracle.export_kernel = o["export_kernel"].get<bool>();
    }
    if (o.contains("fixture")) {
      const json& f = o["fixture"];
      reject_unknown(f, "oracle.fixture", {"type", "c", "gamma", "d", "p_up"});
      OracleFixture fixture;
      fixture.type = get_string(f, "oracle.fixture", "type");
      if (fixture.type == "discrete_power") {
        fixture.c = get_number(f, "oracle.fixture", "c", fixture.c);
        fixture.gamma = get_number(f, "oracle.fixture", "gamma", fixture.gamma);
        fixture.d = get_number(f, "oracle.fixture", "d", fixture.d);
      } else if (fixture.type == "birth_death") {
        fixture.p_up = get_number(f, "oracle.fixture", "p_up", fixture.p_up);
      } else {
        throw ConfigError("config: oracle.fixture.type must be "
                          "discrete_power or birth_death");
      }
      cfg.oracle.fixture = fixture;
    }
  }

  if (doc.contains("drift_check")) {
    const json& d = doc["drift_check"];
    reject_unknown(d, "drift_check", {"kind", "alphas", "x_grid", "samples"});
    cfg.drift_check.kind =
        get_string(d, "drift_check", "kind", cfg.drift_check.kind);
    if (cfg.drift_check.kind != "power" && cfg.drift_check.kind != "transformed")
      throw ConfigError("config: drift_check.kind must be power or transformed");
    if (d.contains("alphas")) {
      cfg.drift_check.alphas.clear();
      for (const auto& a : d["alphas"])
        cfg.drift_check.alphas.push_back(a.get<double>());
    }
    if (d.contains("x_grid")) {
      cfg.drift_check.x_grid.clear();
      for (const auto& x : d["x_grid"])
        cfg.drift_check.x_grid.push_back(x.get<double>());
    }
    cfg.drift_check.samples =
        get_u64(d, "drift_check", "samples", cfg.drift_check.samples);
  }

  if (doc.contains("transforms")) {
    const json& t = doc["transforms"];
    reject_unknown(t, "transforms",
                   {"alpha", "quad_tol", "inv_tol", "x_max", "n_max", "points"});
    cfg.transforms.alpha =
        get_number(t, "transforms", "alpha", cfg.transforms.alpha);
    cfg.transforms.quad_tol =
        get_number(t, "transforms", "quad_tol", cfg.transforms.quad_tol);
    cfg.transforms.inv_tol =
        get_number(t, "transforms", "inv_tol", cfg.transforms.inv_tol);
    cfg.transforms.x_max =
        get_number(t, "transforms", "x_max", cfg.transforms.x_max);
    cfg.transforms.n_max =
        get_number(t, "transforms", "n_max", cfg.transforms.n_max);
    cfg.transforms.points = get_u64(
        t, "transforms", "points",
        static_cast<std::uint64_t>(cfg.transforms.points));
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_echo_json(const RunConfig& cfg) {
  json doc;
  doc["model"] = model_to_json(cfg.model);
  json run;
  run["x0"] = cfg.run.x0;
  run["A"] = cfg.run.threshold;
  run["horizon"] = cfg.run.horizon;
  run["trajectories"] = cfg.run.trajectories;
  run["seed"] = cfg.run.seed;
  json grid;
  grid["kind"] = cfg.run.grid.kind;
  if (cfg.run.grid.kind == "explicit") {
    grid["values"] = cfg.run.grid.explicit_grid;
  } else {
    grid["n_min"] = cfg.run.grid.n_min;
    grid["points"] = cfg.run.grid.points;
  }
  run["grid"] = grid;
  doc["run"] = run;
  json analysis;
  analysis["alpha"] = cfg.analysis.alpha;
  analysis["beta"] = cfg.analysis.beta;
  const auto window = cfg.fit_window();
  analysis["fit_window"] = {window.first, window.second};
  doc["analysis"] = analysis;
  json output;
  output["directory"] = cfg.output.directory;
  output["formats"] = cfg.output.formats;
  doc["output"] = output;
  json oracle;
  oracle["cap"] = cfg.oracle.cap;
  oracle["x0"] = cfg.oracle.x0;
  oracle["n_max"] = cfg.oracle.n_max;
  oracle["tol"] = cfg.oracle.tol;
  oracle["boundary"] = cfg.oracle.boundary;
  oracle["tv_alpha"] = cfg.oracle.tv_alpha;
  oracle["tv_n_min"] = cfg.oracle.tv_n_min;
  oracle["export_kernel"] = cfg.oracle.export_kernel;
  if (cfg.oracle.fixture) {
    json fixture;
    fixture["type"] = cfg.oracle.fixture->type;
    if (cfg.oracle.fixture->type == "discrete_power") {
      fixture["c"] = cfg.oracle.fixture->c;
      fixture["gamma"] = cfg.oracle.fixture->gamma;
      fixture["d"] = cfg.oracle.fixture->d;
    } else {
      fixture["p_up"] = cfg.oracle.fixture->p_up;
    }
    oracle["fixture"] = fixture;
  }
  doc["oracle"] = oracle;
  json drift;
  drift["kind"] = cfg.drift_check.kind;
  drift["alphas"] = cfg.drift_check.alphas;
  drift["x_grid"] = cfg.drift_check.x_grid;
  drift["samples"] = cfg.drift_check.samples;
  doc["drift_check"] = drift;
  json transforms;
  transforms["alpha"] = cfg.transforms.alpha;
  transforms["quad_tol"] = cfg.transforms.quad_tol;
  transforms["inv_tol"] = cfg.transforms.inv_tol;
  transforms["x_max"] = cfg.transforms.x_max;
  transforms["n_max"] = cfg.transforms.n_max;
  transforms["points"] = cfg.transforms.points;
  doc["transforms"] = transforms;
  return doc.dump(2) + "\n";
}

std::uint64_t config_fingerprint(const RunConfig& cfg) {
  return fnv1a_hash(config_echo_json(cfg));
}

}  // namespace growthmc
