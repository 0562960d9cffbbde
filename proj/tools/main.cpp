#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "growthmc/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
  unsigned threads = 0;

  growthmc::pipeline::Options to_options() const {
    growthmc::pipeline::Options opt;
    opt.config_path = config;
    if (!out.empty()) opt.out_dir = out;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
    opt.threads = threads;
    return opt;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Path to the run config (JSON)")
      ->required();
  cmd->add_option("--out", args.out, "Output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "Seed override");
  cmd->add_option("--threads", args.threads,
                  "Worker threads (affects speed only, never results)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, classification and verification toolkit for "
               "one-dimensional stochastic growth models"};
  app.require_subcommand(1);

  CommonArgs classify_args, tail_args, drift_args, oracle_args, trans_args;
  std::string oracle_sub;
  std::string plot_input, plot_output, plot_fit;

  auto* classify = app.add_subcommand(
      "classify", "Regime verdict (theta, lambda, tail bracket)");
  add_common(classify, classify_args);

  auto* tail = app.add_subcommand(
      "tail", "Monte Carlo survival curve, tail fit and sandwich verdict");
  add_common(tail, tail_args);

  auto* drift = app.add_subcommand(
      "drift-check", "Empirical one-step drift signs at pinned states");
  add_common(drift, drift_args);

  auto* oracle = app.add_subcommand(
      "oracle", "Exact kernel computations (survival | invariant | tv)");
  oracle->add_option("sub", oracle_sub, "survival | invariant | tv")
      ->required();
  add_common(oracle, oracle_args);

  auto* transforms = app.add_subcommand(
      "transforms", "Tabulate G, ell and ell' for the model drift");
  add_common(transforms, trans_args);

  auto* plot = app.add_subcommand(
      "plot", "Render a survival CSV as a log-log SVG");
  plot->add_option("--input", plot_input, "Survival CSV")->required();
  plot->add_option("--output", plot_output, "Output SVG path")->required();
  plot->add_option("--fit", plot_fit,
                   "tailfit.json to draw bracket guide lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : growthmc::pipeline::kExitConfig;
  }

  using namespace growthmc::pipeline;
  if (classify->parsed())
    return cmd_classify(classify_args.to_options(), std::cout, std::cerr);
  if (tail->parsed())
    return cmd_tail(tail_args.to_options(), std::cout, std::cerr);
  if (drift->parsed())
    return cmd_drift_check(drift_args.to_options(), std::cout, std::cerr);
  if (oracle->parsed())
    return cmd_oracle(oracle_args.to_options(), oracle_sub, std::cout,
                      std::cerr);
  if (transforms->parsed())
    return cmd_transforms(trans_args.to_options(), std::cout, std::cerr);
  if (plot->parsed()) {
    std::optional<std::string> fit;
    if (!plot_fit.empty()) fit = plot_fit;
    return cmd_plot(plot_input, plot_output, fit, std::cout, std::cerr);
  }
  return kExitConfig;
}
