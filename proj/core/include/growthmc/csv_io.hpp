#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "growthmc/montecarlo.hpp"
#include "growthmc/oracle.hpp"

namespace growthmc {

// Shortest round-trip decimal form of a double (locale-free, deterministic).
std::string format_double(double v);

// Writes bytes to a temporary sibling and renames it into place, so readers
// never observe a partial file and failed runs leave nothing behind.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view bytes);

// FNV-1a over a byte string; used to fingerprint configurations.
std::uint64_t fnv1a_hash(std::string_view bytes);

// Survival CSV schema: header "n,surv,ci_half,trajectories,censored".
// Exact (oracle) curves use trajectories = 0, ci_half = 0.
std::string survival_csv(const SurvivalEstimate& est);
SurvivalEstimate read_survival_csv(const std::string& text);

// TV decay CSV: header "n,tv,weight,weighted".
std::string tv_csv(const TvDecayResult& tv);

// Invariant measure CSV: header "x,pi".
std::string invariant_csv(const std::vector<double>& pi);

// Sparse kernel triplets: header "row,col,prob".  The JSON sidecar carries
// cap, absorbing set and overflow digest; see pipeline.
std::string kernel_csv(const TruncatedKernel& kernel);

// Rebuilds a kernel from triplets; per-row overflow is recovered as the
// mass deficit 1 - sum(row).
TruncatedKernel read_kernel_csv(const std::string& text, std::int32_t cap,
                                std::int32_t absorb_max);

// Drift check CSV: one row per pinned state.
std::string drift_power_csv(const DriftCheckReport& report);
std::string drift_transformed_csv(const DriftCheckReport& report);

}  // namespace growthmc
