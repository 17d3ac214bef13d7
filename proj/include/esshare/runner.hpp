#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esshare/scenario.hpp"

namespace esshare {

enum class Subcommand { Auction, Timeseries, Compare, Audit, CurvesDump };

/// Command-line overrides; every flag has a scenario-file equivalent and wins
/// over it. Values are validated exactly like scenario-file values.
struct RunOverrides {
    std::optional<double> sweep_step;
    std::optional<PriceFloorRule> price_floor_rule;
    std::optional<BurdenRule> burden_rule;
    std::optional<double> fit_price;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
};

struct RunConfig {
    Subcommand subcommand = Subcommand::Auction;
    std::string scenario_path;
    std::string output_dir = ".";
    RunOverrides overrides;
    std::size_t audit_grid = 50;
    double audit_tolerance = 1e-9;
    std::vector<double> demand_sweep;  ///< compare; defaults to {200..450 step 50}
    std::vector<double> alphas;        ///< compare; reluctance sweep when nonempty
    bool quiet = false;                ///< suppress the stdout summary lines
};

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAuditViolation = 2;
inline constexpr int kExitNoIntersection = 3;

/// Executes one pipeline: loads the scenario, applies overrides, writes
/// summary.json plus the pipeline's CSV files into output_dir, and returns
/// the process exit status. Failures are reported on stderr.
int run(const RunConfig& config);

}  // namespace esshare
