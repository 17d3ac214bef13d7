#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "esshare/engine.hpp"
#include "esshare/scenario.hpp"

namespace esshare {

/// Per-RU market state carried between slots (scenario RU order).
struct SlotState {
    std::size_t t = 0;                     ///< slot index, 0-based
    std::vector<double> offers;            ///< x_{i,t}
    std::vector<double> available;         ///< b_{i,t}
    std::vector<double> burdens_prev;      ///< eta_{i,t} once the slot has run
    std::vector<char> participated_prev;   ///< whether RU i was engaged in slot t
};

/// Offer dynamics: an RU that sat out keeps its posted offer; a participant
/// re-offers what is left of its space after the previous slot's net
/// consumption, max(b_{i,t} - (x_{i,t-1} - eta_{i,t-1}), 0).
std::vector<double> advance_offers(const SlotState& prev);

/// Deterministic 53-bit uniform draw in [lo, hi]; the layout of the stream is
/// pinned here so traces do not depend on the standard library's distribution.
double uniform_draw(std::uint64_t raw, double lo, double hi);

/// Per-SFC requirements for one slot, by schedule lookup, proportional split
/// of a scheduled total, or a seeded uniform draw per SFC.
std::vector<double> sample_demand(std::mt19937_64& gen, const DemandModel& model,
                                  std::size_t slot, std::span<const FacilityController> sfcs);

struct SlotRecord {
    std::size_t t = 0;     ///< 1-based slot number
    bool skipped = false;  ///< no feasible auction this slot
    std::string skip_reason;
    std::vector<double> available;  ///< b_{i,t}, scenario RU order
    std::vector<double> offered;    ///< x_{i,t}
    std::vector<double> shared;     ///< Q_{i,t}
    std::vector<double> burdens;    ///< eta_{i,t}
    std::vector<double> utilities;  ///< U_{i,t} at the allocated quantity
    std::vector<char> participated;
    std::vector<double> demands;    ///< q_{m,t}, scenario SFC order
    double p_star = 0.0;
    double z_star = 0.0;
    std::size_t j = 0;
    std::size_t k = 0;
};

struct TimeSeriesTrace {
    std::vector<SlotRecord> slots;
};

/// Runs the auction once per slot over scenario.temporal (a single static slot
/// when absent). Slots without a feasible intersection are recorded as skipped
/// and leave all offers untouched.
TimeSeriesTrace simulate(const MarketScenario& scenario);

}  // namespace esshare
