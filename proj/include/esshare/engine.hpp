#pragma once

#include <optional>
#include <vector>

#include "esshare/allocation.hpp"
#include "esshare/determination.hpp"
#include "esshare/stackelberg.hpp"

namespace esshare {

/// One full static auction: determination, payment game, allocation.
struct AuctionRun {
    DeterminationOutcome det;
    std::vector<ResidentialUnit> participants;   ///< engaged RUs, supply order
    std::vector<FacilityController> buyers;      ///< engaged SFCs, demand order
    EquilibriumOutcome eq;
    AllocationOutcome alloc;
    std::vector<double> realized_utilities;      ///< net benefit at the allocated Q_i
};

/// Runs the three auction rules on a validated scenario. Propagates
/// NoIntersectionError / InsufficientParticipantsError from determination.
AuctionRun run_auction(const MarketScenario& scenario);

}  // namespace esshare
