#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace growthmc::pipeline {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;         // config/schema/usage errors
inline constexpr int kExitNonConvergence = 3; // numeric limit did not settle
inline constexpr int kExitFail = 4;           // sandwich verdict FAIL
inline constexpr int kExitCap = 5;            // kernel cap / oracle failures

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;     // overrides output.directory
  std::optional<std::uint64_t> seed;      // overrides run.seed
  unsigned threads = 0;                   // 0 = hardware; never changes results
};

int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_tail(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_drift_check(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_oracle(const Options& opt, const std::string& sub, std::ostream& out,
               std::ostream& err);
int cmd_transforms(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_plot(const std::string& input_csv, const std::string& output_svg,
             const std::optional<std::string>& fit_json, std::ostream& out,
             std::ostream& err);

}  // namespace growthmc::pipeline
