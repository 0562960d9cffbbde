#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "growthmc/csv_io.hpp"
#include "growthmc/errors.hpp"
#include "growthmc/oracle.hpp"
#include "growthmc/run_config.hpp"
#include "growthmc/svg_plot.hpp"

using namespace growthmc;

namespace {

SurvivalEstimate three_points() {
  SurvivalEstimate est;
  est.n_grid = {10, 100, 1000};
  est.surv = {0.5, 0.2, 0.05};
  est.ci_half = {0.01, 0.008, 0.004};
  est.trajectories = 10000;
  est.censored = 120;
  est.horizon = 1000;
  return est;
}

std::size_t count_substr(const std::string& text, const std::string& what) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(what); pos != std::string::npos;
       pos = text.find(what, pos + what.size()))
    ++count;
  return count;
}

constexpr const char* kMinimalConfig = R"({
  "model": {"family": "bessel", "delta": -0.5}
})";

}  // namespace

TEST_CASE("survival CSV round trip") {
  const SurvivalEstimate est = three_points();
  const std::string csv = survival_csv(est);
  CHECK(csv.rfind("n,surv,ci_half,trajectories,censored\n", 0) == 0);
  const SurvivalEstimate back = read_survival_csv(csv);
  REQUIRE(back.n_grid == est.n_grid);
  for (std::size_t i = 0; i < est.surv.size(); ++i) {
    CHECK(back.surv[i] == est.surv[i]);  // shortest round-trip formatting
    CHECK(back.ci_half[i] == est.ci_half[i]);
  }
  CHECK(back.trajectories == est.trajectories);
  CHECK(back.censored == est.censored);
}

TEST_CASE("survival CSV schema errors") {
  CHECK_THROWS_AS(read_survival_csv(""), ConfigError);
  CHECK_THROWS_AS(read_survival_csv("n,surv\n1,0.5\n"), ConfigError);
  CHECK_THROWS_AS(read_survival_csv("n,surv,ci_half,trajectories,censored\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      read_survival_csv("n,surv,ci_half,trajectories,censored\n1,zz,0,1,0\n"),
      ConfigError);
}

TEST_CASE("atomic write leaves no temporaries") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "growthmc_io_test";
  fs::remove_all(dir);
  const fs::path target = dir / "sub" / "file.csv";
  atomic_write_file(target, "hello\n");
  std::ifstream in(target);
  std::string line;
  std::getline(in, line);
  CHECK(line == "hello");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(target.parent_path())) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
  fs::remove_all(dir);
}

TEST_CASE("svg output is deterministic with one polyline per series") {
  const SurvivalEstimate est = three_points();
  const std::string a = survival_svg(est, {});
  const std::string b = survival_svg(est, {});
  CHECK(a == b);
  CHECK(count_substr(a, "<polyline") == 1);
  CHECK(count_substr(a, "<svg") == 1);

  const std::string with_guides =
      survival_svg(est, PlotGuides{0.4, 0.6});
  CHECK(count_substr(with_guides, "<polyline") == 1);
  CHECK(with_guides.size() > a.size());
}

TEST_CASE("svg rejects degenerate curves") {
  SurvivalEstimate est;
  est.n_grid = {10};
  est.surv = {0.5};
  est.ci_half = {0.0};
  CHECK_THROWS_AS(survival_svg(est, {}), ConfigError);
}

TEST_CASE("kernel CSV export/import round trip") {
  const TruncatedKernel kernel =
      build_kernel(CriticalGwi{0.5}, 96, /*absorb_max=*/0);
  const std::string csv = kernel_csv(kernel);
  const TruncatedKernel back = read_kernel_csv(csv, 96, 0);
  REQUIRE(back.rows.size() == kernel.rows.size());
  for (std::size_t x = 0; x < kernel.rows.size(); ++x) {
    REQUIRE(back.rows[x].entries.size() == kernel.rows[x].entries.size());
    for (std::size_t i = 0; i < kernel.rows[x].entries.size(); ++i) {
      CHECK(back.rows[x].entries[i].first == kernel.rows[x].entries[i].first);
      CHECK(back.rows[x].entries[i].second ==
            kernel.rows[x].entries[i].second);
    }
    CHECK(std::abs(back.rows[x].overflow - kernel.rows[x].overflow) <= 1e-12);
  }
  CHECK_THROWS_AS(read_kernel_csv("row,col\n", 96, 0), ConfigError);
}

TEST_CASE("config parsing fills defaults and validates") {
  const RunConfig cfg = parse_config(kMinimalConfig);
  CHECK(family_name(cfg.model) == "bessel");
  CHECK(cfg.run.trajectories == 100000);
  CHECK(cfg.output.directory == "out");
  const auto window = cfg.fit_window();
  CHECK(window.first == doctest::Approx(500.0));
  CHECK(window.second == doctest::Approx(10000.0));
}

TEST_CASE("config rejects unknown keys and bad types") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"bessel","delta":-0.5},
                                  "runn":{}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"bessel","delta":-0.5,
                                  "extra":1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"wat"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"bessel"}})"),
                  ConfigError);  // delta missing
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"bessel","delta":-0.5},
                                  "run":{"horizon":-3}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":{"family":"bessel","delta":-0.5},
                                  "output":{"formats":["bmp"]}})"),
                  ConfigError);
}

TEST_CASE("config echo reparses to the same document") {
  const RunConfig cfg = parse_config(R"({
    "model": {"family": "power_drift", "c": 0.25, "gamma": 0.0, "d": 1.0},
    "run": {"x0": 200, "A": 20, "horizon": 20000, "trajectories": 5000,
            "seed": 77},
    "analysis": {"alpha": 0.35, "beta": 0.65}
  })");
  const std::string echo = config_echo_json(cfg);
  const RunConfig back = parse_config(echo);
  CHECK(config_echo_json(back) == echo);
  CHECK(config_fingerprint(back) == config_fingerprint(cfg));
  CHECK(back.run.seed == 77);
}

TEST_CASE("fingerprint tracks config content") {
  const RunConfig a = parse_config(kMinimalConfig);
  RunConfig b = a;
  b.run.seed += 1;
  CHECK(config_fingerprint(a) != config_fingerprint(b));
}
