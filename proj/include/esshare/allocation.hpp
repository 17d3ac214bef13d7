#pragma once

#include <span>
#include <string>
#include <vector>

#include "esshare/scenario.hpp"

namespace esshare {

struct AllocationOutcome {
    std::vector<double> shared;   ///< Q_i per participating RU
    std::vector<double> burdens;  ///< eta_i per participating RU
    double oversupply = 0.0;      ///< max(sum x - sum q, 0)
    BurdenRule rule = BurdenRule::Equal;
};

/// Uniform split of the oversupply: each of the n entries is oversupply / n.
std::vector<double> equal_burden(std::size_t n, double oversupply);

/// Split proportional to the given positive weights (reservation prices or
/// offers). The last entry absorbs the rounding residue so the burdens sum to
/// the oversupply exactly. Throws on a nonpositive weight.
std::vector<double> proportional_burden(std::span<const double> weights, double oversupply);

/// Post-equilibrium allocation. When offers fit inside demand each RU shares
/// its full offer. Otherwise burdens are computed by `rule`, allocations are
/// clipped at zero, and the clipped shortfall is re-spread (water-filling)
/// across RUs that still hold a positive allocation until the shared total
/// equals the demand total exactly. `reserves` feeds the proportional-r rule.
AllocationOutcome allocate(std::span<const double> x_star, std::span<const double> demands,
                           BurdenRule rule, std::span<const double> reserves);

/// Pairing of pooled quantities: RU space is assigned greedily in SFC bid
/// order. Only totals affect utilities; the pairs are reporting output.
struct SharePair {
    std::string sfc_id;
    std::string ru_id;
    double qty = 0.0;
};

std::vector<SharePair> pair_allocations(std::span<const FacilityController> sfcs,
                                        std::span<const ResidentialUnit> rus,
                                        std::span<const double> shared);

}  // namespace esshare
