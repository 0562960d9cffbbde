#include "growthmc/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "growthmc/classifier.hpp"
#include "growthmc/csv_io.hpp"
#include "growthmc/errors.hpp"
#include "growthmc/models.hpp"
#include "growthmc/montecarlo.hpp"
#include "growthmc/oracle.hpp"
#include "growthmc/run_config.hpp"
#include "growthmc/stats.hpp"
#include "growthmc/svg_plot.hpp"
#include "growthmc/transforms.hpp"

namespace growthmc::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Resolved {
  RunConfig cfg;
  fs::path out_dir;
};

Resolved resolve(const Options& opt) {
  Resolved r;
  r.cfg = load_config(opt.config_path);
  if (opt.seed) r.cfg.run.seed = *opt.seed;
  if (opt.out_dir) r.cfg.output.directory = *opt.out_dir;
  r.out_dir = r.cfg.output.directory;
  return r;
}

void write_echo(const Resolved& r) {
  atomic_write_file(r.out_dir / "config-echo.json", config_echo_json(r.cfg));
}

std::string hex_fingerprint(std::uint64_t fp) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(fp));
  return buf;
}

json report_to_json(const ClassificationReport& rep) {
  json j;
  j["theta"] = rep.theta;
  j["lambda"] = rep.lambda;
  j["regime"] = regime_name(rep.regime);
  j["tail_exponent_center"] = rep.tail_exponent_center;
  if (rep.bracket) {
    j["bracket"] = {{"lo", rep.bracket->lo}, {"hi", rep.bracket->hi}};
  } else {
    j["bracket"] = nullptr;
  }
  if (rep.tv_rate_exponent)
    j["tv_rate_exponent"] = *rep.tv_rate_exponent;
  else
    j["tv_rate_exponent"] = nullptr;
  j["theta_converged"] = rep.theta_converged;
  j["lambda_converged"] = rep.lambda_converged;
  j["markov"] = rep.markov;
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  return j;
}

json fit_to_json(const TailFit& fit) {
  json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["stderr"] = fit.stderr_;
  j["window"] = {fit.window_lo, fit.window_hi};
  j["points_used"] = fit.points_used;
  j["min_surv_used"] = fit.min_surv_used;
  return j;
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const CapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

TruncatedKernel kernel_from_config(const RunConfig& cfg, bool with_absorbing) {
  const BoundaryPolicy boundary = cfg.oracle.boundary == "reflect"
                                      ? BoundaryPolicy::ReflectToCap
                                      : BoundaryPolicy::TrackOverflow;
  if (cfg.oracle.fixture) {
    const auto& f = *cfg.oracle.fixture;
    if (f.type == "discrete_power")
      return build_discrete_power_kernel(f.c, f.gamma, f.d, cfg.oracle.cap,
                                         boundary);
    return build_birth_death_kernel(f.p_up, cfg.oracle.cap);
  }
  const std::int32_t absorb_max =
      with_absorbing ? static_cast<std::int32_t>(std::floor(cfg.run.threshold))
                     : -1;
  return build_kernel(cfg.model, cfg.oracle.cap, absorb_max, boundary);
}

// Drift spec and theta used for the transform weights of the tv pipeline.
DriftSpec oracle_drift(const RunConfig& cfg) {
  if (cfg.oracle.fixture) {
    if (cfg.oracle.fixture->type != "discrete_power")
      throw ConfigError(
          "oracle tv: only the discrete_power fixture has a drift/theta");
    return DriftSpec::power(cfg.oracle.fixture->c, cfg.oracle.fixture->gamma);
  }
  return drift_spec(cfg.model);
}

double oracle_theta(const RunConfig& cfg) {
  if (cfg.oracle.fixture)
    return 2.0 * cfg.oracle.fixture->c / cfg.oracle.fixture->d;
  return compute_theta(cfg.model);
}

}  // namespace

int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    const Resolved r = resolve(opt);
    const ClassificationReport rep =
        classify_model(r.cfg.model, r.cfg.analysis.alpha, r.cfg.analysis.beta);
    const json j = report_to_json(rep);
    const std::string text = j.dump(2) + "\n";
    write_echo(r);
    atomic_write_file(r.out_dir / "classification.json", text);
    out << text;
    if (!rep.theta_converged || !rep.lambda_converged)
      return kExitNonConvergence;
    return kExitOk;
  });
}

int cmd_tail(const Options& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    const Resolved r = resolve(opt);
    const RunConfig& cfg = r.cfg;

    TrajectoryConfig traj;
    traj.x0 = cfg.run.x0;
    traj.threshold = cfg.run.threshold;
    traj.horizon = cfg.run.horizon;
    traj.seed = cfg.run.seed;

    SurvivalEstimate est = estimate_survival(
        cfg.model, traj, cfg.run.trajectories, cfg.n_grid(), opt.threads);
    est.fingerprint = config_fingerprint(cfg);

    const ClassificationReport rep =
        classify_model(cfg.model, cfg.analysis.alpha, cfg.analysis.beta);
    if (!rep.bracket)
      throw ConfigError(
          "tail: no exponent bracket for this model/regime (" +
          regime_name(rep.regime) + "); " + rep.warning);

    const auto window = cfg.fit_window();
    const TailFit fit = fit_tail(est, window.first, window.second);
    const SandwichVerdict verdict = sandwich_verdict(fit, *rep.bracket);

    write_echo(r);
    json meta;
    meta["fingerprint"] = hex_fingerprint(est.fingerprint);
    meta["trajectories"] = est.trajectories;
    meta["censored"] = est.censored;
    meta["horizon"] = est.horizon;
    meta["seed"] = cfg.run.seed;
    if (cfg.output.wants("csv"))
      atomic_write_file(r.out_dir / "survival.csv", survival_csv(est));
    atomic_write_file(r.out_dir / "survival-meta.json", meta.dump(2) + "\n");

    json jfit;
    jfit["fit"] = fit_to_json(fit);
    jfit["bracket"] = {{"lo", rep.bracket->lo}, {"hi", rep.bracket->hi}};
    jfit["verdict"] = sandwich_verdict_name(verdict);
    jfit["theta"] = rep.theta;
    jfit["lambda"] = rep.lambda;
    jfit["alpha"] = cfg.analysis.alpha;
    jfit["beta"] = cfg.analysis.beta;
    const std::string fit_text = jfit.dump(2) + "\n";
    atomic_write_file(r.out_dir / "tailfit.json", fit_text);
    if (cfg.output.wants("svg")) {
      PlotGuides guides{rep.bracket->lo, rep.bracket->hi};
      atomic_write_file(r.out_dir / "survival.svg",
                        survival_svg(est, guides));
    }
    out << fit_text;
    return verdict == SandwichVerdict::Fail ? kExitFail : kExitOk;
  });
}

int cmd_drift_check(const Options& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    const Resolved r = resolve(opt);
    const RunConfig& cfg = r.cfg;
    write_echo(r);
    json j;
    j["kind"] = cfg.drift_check.kind;
    j["samples"] = cfg.drift_check.samples;
    j["x_grid"] = cfg.drift_check.x_grid;
    if (cfg.drift_check.kind == "power") {
      std::string csv = "alpha,x,mean,stderr,verdict\n";
      json scans = json::array();
      for (const double alpha : cfg.drift_check.alphas) {
        const DriftCheckReport report =
            check_drift_power(cfg.model, alpha, cfg.drift_check.x_grid,
                              cfg.drift_check.samples, cfg.run.seed);
        json scan;
        scan["alpha"] = alpha;
        json points = json::array();
        for (const auto& p : report.points) {
          csv += format_double(alpha) + ',' + format_double(p.x) + ',' +
                 format_double(p.mean) + ',' + format_double(p.stderr_) + ',' +
                 drift_verdict_name(p.verdict) + '\n';
          points.push_back({{"x", p.x},
                            {"mean", p.mean},
                            {"stderr", p.stderr_},
                            {"verdict", drift_verdict_name(p.verdict)}});
        }
        scan["points"] = points;
        scans.push_back(scan);
      }
      j["scans"] = scans;
      if (cfg.output.wants("csv"))
        atomic_write_file(r.out_dir / "drift_check.csv", csv);
    } else {
      const TransformEngine engine(drift_spec(cfg.model));
      const DriftCheckReport report = check_drift_transformed(
          cfg.model, engine, cfg.drift_check.x_grid, cfg.drift_check.samples,
          cfg.run.seed);
      json points = json::array();
      for (const auto& p : report.transformed) {
        points.push_back({{"x", p.x},
                          {"G", p.y},
                          {"m1", p.m1},
                          {"se1", p.se1},
                          {"m2", p.m2},
                          {"se2", p.se2}});
      }
      j["points"] = points;
      j["max_neg_m1"] = report.max_neg_m1;
      j["max_m2_over_G"] = report.max_m2_over_y;
      if (cfg.output.wants("csv"))
        atomic_write_file(r.out_dir / "drift_check.csv",
                          drift_transformed_csv(report));
    }
    const std::string text = j.dump(2) + "\n";
    atomic_write_file(r.out_dir / "drift_check.json", text);
    out << text;
    return kExitOk;
  });
}

int cmd_oracle(const Options& opt, const std::string& sub, std::ostream& out,
               std::ostream& err) {
  return run_guarded(err, [&]() {
    const Resolved r = resolve(opt);
    const RunConfig& cfg = r.cfg;
    write_echo(r);

    const bool survival_mode = sub == "survival";
    const TruncatedKernel kernel = kernel_from_config(cfg, survival_mode);
    if (cfg.oracle.export_kernel) {
      atomic_write_file(r.out_dir / "kernel.csv", kernel_csv(kernel));
      json kj;
      kj["cap"] = kernel.cap;
      kj["absorb_max"] = kernel.absorb_max;
      kj["max_overflow"] = kernel.max_overflow;
      kj["flagged_rows"] = kernel.flagged_rows.size();
      kj["overflow_digest"] = hex_fingerprint(fnv1a_hash(kernel_csv(kernel)));
      atomic_write_file(r.out_dir / "kernel.json", kj.dump(2) + "\n");
    }

    if (survival_mode) {
      const SurvivalCurve curve = exact_survival(
          kernel, cfg.oracle.x0, cfg.oracle.n_max, std::max(cfg.oracle.tol, 1e-9));
      // Publish on the configured grid with the exact-curve convention
      // trajectories = 0.
      SurvivalEstimate est;
      est.n_grid = geometric_grid(cfg.run.grid.n_min, cfg.oracle.n_max,
                                  cfg.run.grid.points);
      for (const auto n : est.n_grid) {
        est.surv.push_back(curve.values[static_cast<std::size_t>(n)]);
        est.ci_half.push_back(0.0);
      }
      est.horizon = cfg.oracle.n_max;
      est.fingerprint = config_fingerprint(cfg);
      if (cfg.output.wants("csv"))
        atomic_write_file(r.out_dir / "oracle_survival.csv",
                          survival_csv(est));
      json j;
      j["overflow_bound"] = curve.overflow_bound;
      j["x0"] = cfg.oracle.x0;
      j["cap"] = kernel.cap;
      j["absorb_max"] = kernel.absorb_max;
      const auto window = cfg.fit_window();
      try {
        const TailFit fit = fit_tail(est, window.first, window.second);
        j["fit"] = fit_to_json(fit);
      } catch (const InsufficientPointsError&) {
        j["fit"] = nullptr;
      }
      const std::string text = j.dump(2) + "\n";
      atomic_write_file(r.out_dir / "oracle_survival.json", text);
      out << text;
      return kExitOk;
    }

    const InvariantResult inv = invariant_measure(kernel, cfg.oracle.tol);
    json ji;
    ji["residual"] = inv.residual;
    ji["iterations"] = inv.iterations;
    ji["converged"] = inv.converged;
    ji["overflow_bound"] = inv.overflow_bound;
    if (sub == "invariant") {
      if (cfg.output.wants("csv"))
        atomic_write_file(r.out_dir / "invariant.csv", invariant_csv(inv.pi));
      const std::string text = ji.dump(2) + "\n";
      atomic_write_file(r.out_dir / "invariant.json", text);
      out << text;
      return inv.converged ? kExitOk : kExitCap;
    }
    if (sub != "tv")
      throw ConfigError("oracle: unknown subcommand '" + sub +
                        "' (survival|invariant|tv)");
    if (!inv.converged)
      throw CapError("oracle tv: invariant measure did not converge to tol");

    const DriftSpec drift = oracle_drift(cfg);
    const TransformEngine engine(drift);
    const double theta = oracle_theta(cfg);
    const double lambda = compute_lambda(drift);
    const TvRatePrediction rate =
        predict_tv_rate(engine, theta, lambda, cfg.oracle.tv_alpha);
    const auto grid = geometric_grid(cfg.oracle.tv_n_min, cfg.oracle.n_max, 9);
    std::vector<double> weights;
    weights.reserve(grid.size());
    for (const auto n : grid)
      weights.push_back(rate.eval(engine, static_cast<double>(n)));
    const TvDecayResult tv =
        tv_decay(kernel, inv.pi, cfg.oracle.x0, grid, weights);
    if (cfg.output.wants("csv"))
      atomic_write_file(r.out_dir / "tv.csv", tv_csv(tv));
    json jt;
    jt["alpha"] = cfg.oracle.tv_alpha;
    jt["rate_slope"] = rate.slope;
    jt["overflow_bound"] = tv.overflow_bound;
    jt["invariant"] = ji;
    if (!tv.points.empty()) {
      jt["weighted_first"] = tv.points.front().weighted;
      jt["weighted_last"] = tv.points.back().weighted;
    }
    const std::string text = jt.dump(2) + "\n";
    atomic_write_file(r.out_dir / "tv.json", text);
    out << text;
    return kExitOk;
  });
}

int cmd_transforms(const Options& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    const Resolved r = resolve(opt);
    const RunConfig& cfg = r.cfg;
    write_echo(r);
    const TransformEngine engine(drift_spec(cfg.model), cfg.transforms.quad_tol,
                                 cfg.transforms.inv_tol);
    const double alpha = cfg.transforms.alpha;
    std::string xcsv = "x,g,G\n";
    std::string ncsv = "n,ell,ell_prime\n";
    const std::size_t points = cfg.transforms.points;
    for (std::size_t i = 0; i < points; ++i) {
      const double t =
          static_cast<double>(i) / static_cast<double>(points - 1);
      const double x = std::exp(t * std::log(cfg.transforms.x_max));
      xcsv += format_double(x) + ',' + format_double(engine.drift().eval(x)) +
              ',' + format_double(engine.eval_G(x)) + '\n';
      const double n = std::exp(t * std::log(cfg.transforms.n_max));
      ncsv += format_double(n) + ',' +
              format_double(engine.eval_ell(alpha, n)) + ',' +
              format_double(engine.eval_ell_prime(alpha, n)) + '\n';
    }
    atomic_write_file(r.out_dir / "transforms_x.csv", xcsv);
    atomic_write_file(r.out_dir / "transforms_ell.csv", ncsv);
    json j;
    j["alpha"] = alpha;
    j["log_slope_ell"] = engine.log_slope_ell(alpha, 1e3, cfg.transforms.n_max);
    const std::string text = j.dump(2) + "\n";
    atomic_write_file(r.out_dir / "transforms.json", text);
    out << text;
    return kExitOk;
  });
}

int cmd_plot(const std::string& input_csv, const std::string& output_svg,
             const std::optional<std::string>& fit_json, std::ostream& out,
             std::ostream& err) {
  return run_guarded(err, [&]() {
    std::ifstream in(input_csv, std::ios::binary);
    if (!in) throw ConfigError("plot: cannot open '" + input_csv + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const SurvivalEstimate est = read_survival_csv(ss.str());
    std::optional<PlotGuides> guides;
    if (fit_json) {
      std::ifstream fin(*fit_json, std::ios::binary);
      if (!fin) throw ConfigError("plot: cannot open '" + *fit_json + "'");
      json j;
      try {
        fin >> j;
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("plot: bad fit JSON: ") + e.what());
      }
      if (!j.contains("bracket"))
        throw ConfigError("plot: fit JSON has no bracket");
      guides = PlotGuides{j["bracket"]["lo"].get<double>(),
                          j["bracket"]["hi"].get<double>()};
    }
    atomic_write_file(output_svg, survival_svg(est, guides));
    out << "wrote " << output_svg << "\n";
    return kExitOk;
  });
}

}  // namespace growthmc::pipeline
