#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growthmc/models.hpp"

namespace growthmc {

struct GridPolicy {
  std::string kind = "geometric";  // or "explicit"
  std::uint64_t n_min = 10;
  std::size_t points = 40;
  std::vector<std::uint64_t> explicit_grid;
};

struct RunSection {
  double x0 = 100.0;
  double threshold = 10.0;  // "A" in the config document
  std::uint64_t horizon = 10000;
  std::uint64_t trajectories = 100000;
  std::uint64_t seed = 1;
  GridPolicy grid;
};

struct AnalysisSection {
  double alpha = 0.35;
  double beta = 0.65;
  std::optional<std::pair<double, double>> fit_window;  // default horizon/20..horizon
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  bool wants(const std::string& fmt) const;
};

struct OracleFixture {
  std::string type;  // "discrete_power" | "birth_death"
  double c = 0.25, gamma = 0.7, d = 1.0;  // discrete_power
  double p_up = 0.3;                      // birth_death
};

struct OracleSection {
  std::int32_t cap = 2000;
  std::int32_t x0 = 50;
  std::uint64_t n_max = 10000;
  double tol = 1e-10;
  std::string boundary = "overflow";  // or "reflect"
  double tv_alpha = 0.4;
  std::uint64_t tv_n_min = 100;
  bool export_kernel = false;
  std::optional<OracleFixture> fixture;
};

struct DriftCheckSection {
  std::string kind = "power";  // or "transformed"
  std::vector<double> alphas = {0.2, 0.4, 0.6, 0.8};
  std::vector<double> x_grid = {1e3};
  std::uint64_t samples = 1000000;
};

struct TransformsSection {
  double alpha = 0.5;
  double quad_tol = 1e-10;
  double inv_tol = 1e-9;
  double x_max = 1e4;
  double n_max = 1e6;
  std::size_t points = 64;
};

struct RunConfig {
  GrowthModel model;
  RunSection run;
  AnalysisSection analysis;
  OutputSection output;
  OracleSection oracle;
  DriftCheckSection drift_check;
  TransformsSection transforms;

  std::vector<std::uint64_t> n_grid() const;
  std::pair<double, double> fit_window() const;
};

// Parses and schema-validates a config document.  Unknown keys anywhere in
// the document are rejected.  Throws ConfigError with a path-qualified
// message on any violation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// The resolved document (defaults filled in), suitable both as the
// config-echo artifact and as a config for an identical re-run.
std::string config_echo_json(const RunConfig& cfg);

// Stable 64-bit fingerprint of the resolved configuration.
std::uint64_t config_fingerprint(const RunConfig& cfg);

}  // namespace growthmc
