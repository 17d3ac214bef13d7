#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esshare/scenario.hpp"

namespace esshare {

enum class CurveKind { Supply, Demand };

/// One step of an aggregate curve: all quantity up to cum_qty (exclusive of the
/// previous segment's end) trades at `price`. `agent` is the position of the
/// contributing agent in the ordered list the curve was built from.
struct CurveSegment {
    double cum_qty = 0.0;
    double price = 0.0;
    std::size_t agent = 0;
};

struct StepCurve {
    CurveKind kind = CurveKind::Supply;
    std::vector<CurveSegment> points;
};

/// Aggregate supply from RUs ordered ascending by reservation price. Quantities
/// default to b_max; the second form supplies per-RU offers (temporal mode).
/// Agents offering zero quantity are not represented in the curve.
StepCurve build_supply_curve(std::span<const ResidentialUnit> rus);
StepCurve build_supply_curve(std::span<const ResidentialUnit> rus, std::span<const double> qty);

/// Aggregate demand from SFCs ordered descending by bid.
StepCurve build_demand_curve(std::span<const FacilityController> sfcs);
StepCurve build_demand_curve(std::span<const FacilityController> sfcs, std::span<const double> qty);

/// Result of the determination rule: the marginal pair (J, K), the engaged
/// participants (J-1 RUs, K-1 SFCs, as positions in the ordered input lists),
/// and the admissible auction-price interval.
struct DeterminationOutcome {
    std::size_t j = 0;  ///< 1-based curve index of the marginal RU
    std::size_t k = 0;  ///< 1-based curve index of the marginal SFC
    std::vector<std::size_t> participants_ru;
    std::vector<std::size_t> participants_sfc;
    double p_min = 0.0;
    double p_max = 0.0;
};

/// Intersects the two step curves with a cumulative-quantity two-pointer walk:
/// starting from the cheapest RU and the highest bidder, every feasible pair
/// (a_k >= r_j) is recorded, then the side with less cumulative quantity
/// advances (both on a tie). The last recorded pair is (J, K).
///
/// Throws NoIntersectionError when no feasible pair exists and
/// InsufficientParticipantsError when the cut leaves J < 2 or K < 2.
DeterminationOutcome determine(const StepCurve& supply, const StepCurve& demand,
                               PriceFloorRule floor_rule);

/// Determination on a validated scenario (quantities b_max, configured floor).
DeterminationOutcome determine(const MarketScenario& scenario);

}  // namespace esshare
