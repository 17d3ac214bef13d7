#pragma once

#include <string>
#include <vector>

#include "esshare/baselines_audit.hpp"
#include "esshare/engine.hpp"
#include "esshare/temporal.hpp"

namespace esshare {

/// Fixed numeric formatting for data files: 6 significant digits.
std::string fmt6(double value);

void write_text_file(const std::string& path, const std::string& content);

std::string curves_csv(const StepCurve& supply, const StepCurve& demand,
                       const DeterminationOutcome& det);
std::string trace_csv(const AuctionRun& run);
std::string allocation_csv(const AuctionRun& run);
std::string pairing_csv(const std::vector<SharePair>& pairs);
std::string timeseries_csv(const MarketScenario& scenario, const TimeSeriesTrace& trace);
std::string timeseries_slots_csv(const TimeSeriesTrace& trace);
std::string comparison_csv(const ComparisonReport& report);
std::string reluctance_csv(const std::vector<AlphaSweepRow>& rows);
std::string audit_csv(const AuditReport& report);

std::string auction_summary_json(const MarketScenario& scenario, const AuctionRun& run);
std::string curves_summary_json(const DeterminationOutcome& det);
std::string timeseries_summary_json(const MarketScenario& scenario, const TimeSeriesTrace& trace);
std::string compare_summary_json(const ComparisonReport& report,
                                 const std::vector<AlphaSweepRow>& alpha_rows);
std::string audit_summary_json(const AuditReport& report);

}  // namespace esshare
