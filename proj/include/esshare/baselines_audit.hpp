#pragma once

#include <span>
#include <string>
#include <vector>

#include "esshare/engine.hpp"
#include "esshare/scenario.hpp"

namespace esshare {

/// Per-RU utilities of one settlement scheme, scenario RU order
/// (non-participants hold zero), plus the average over all RUs.
struct SchemeUtilities {
    std::vector<double> per_ru;
    double average = 0.0;
};

/// Equal-distribution baseline: each engaged RU shares min(total demand /
/// (J-1), x_i*), paid the same auction price as the proposed run.
SchemeUtilities run_ed(const MarketScenario& scenario, const AuctionRun& run);

/// Feed-in-tariff baseline: the proposed offers x_i* are sold at the
/// configured tariff instead of the auction price. Negative values (tariff
/// below reservation) are reported as-is.
SchemeUtilities run_fit(const MarketScenario& scenario, const AuctionRun& run);

/// The proposed scheme's realized utilities in scenario RU order.
SchemeUtilities proposed_utilities(const MarketScenario& scenario, const AuctionRun& run);

struct IrViolation {
    std::string agent_id;
    std::string what;
    double value = 0.0;
};

struct IcViolation {
    std::string ru_id;
    double misreported_r = 0.0;
    double gain = 0.0;
};

struct AuditReport {
    std::vector<IrViolation> ir_violations;
    std::vector<IcViolation> ic_violations;
    double tolerance = 1e-9;

    bool passed() const { return ir_violations.empty() && ic_violations.empty(); }
};

/// Individual rationality: every engaged RU keeps a nonnegative net benefit
/// and every engaged SFC a nonnegative per-unit margin at the auction price.
void check_individual_rationality(const AuctionRun& run, AuditReport& report);

/// Incentive compatibility, checked by exhaustive misreport search: each RU's
/// declared reservation price is swept over a grid spanning [0.5 r, 1.5 r] and
/// the full pipeline re-runs on the declaration. The deviating RU still plays
/// (and is scored by) its true preferences; a declaration only moves the
/// participant cut and the price interval. Realized utility at the allocated
/// quantity must not beat the truthful run by more than the relative
/// tolerance (scaled by max(1, |truthful|)).
void check_incentive_compatibility(const MarketScenario& scenario, std::size_t grid_size,
                                   double relative_tolerance, AuditReport& report);

struct ComparisonRow {
    double total_q = 0.0;
    double avg_proposed = 0.0;
    double avg_ed = 0.0;
    double avg_fit = 0.0;
    double improvement_vs_ed_pct = 0.0;
    double improvement_vs_fit_pct = 0.0;
    bool feasible = true;
    std::vector<double> per_ru_proposed;
    std::vector<double> per_ru_ed;
    std::vector<double> per_ru_fit;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> notes;
};

/// Scales total SFC demand through the given values (keeping each SFC's
/// share) and tabulates proposed vs ED vs FIT average utilities.
ComparisonReport compare(const MarketScenario& scenario, std::span<const double> demand_totals);

struct AlphaSweepRow {
    double alpha = 0.0;
    double avg_ru_utility = 0.0;
    double avg_sfc_saving = 0.0;   ///< per-SFC average cost saving at equilibrium
    double ru_change_pct = 0.0;    ///< vs the first alpha in the sweep
    double sfc_change_pct = 0.0;
};

/// Re-runs the pipeline with every RU's reluctance replaced by each sweep
/// value; reports averages and the relative change against the first value.
std::vector<AlphaSweepRow> alpha_sweep(const MarketScenario& scenario,
                                       std::span<const double> alphas);

}  // namespace esshare
