#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esshare/errors.hpp"

namespace esshare {

/// Lower bound of the admissible auction-price interval.
///  - SecondHighestIncluded: reservation price of the last participating RU (r_{J-1}).
///  - SecondLowest: second-lowest reservation price in the cut (r_2), falling
///    back to r_{J-1} when fewer than three RUs are matched.
///  - FirstExcluded: the marginal RU's price r_J, collapsing the interval.
enum class PriceFloorRule { SecondHighestIncluded, SecondLowest, FirstExcluded };

/// How oversupply is split across participating RUs.
enum class BurdenRule { Equal, ProportionalReserve, ProportionalOffer };

/// Seller of storage space. b_max is always s_cap - d_reserved.
struct ResidentialUnit {
    std::string id;
    double s_cap = 0.0;       ///< battery capacity [kWh]
    double d_reserved = 0.0;  ///< self-use reserve [kWh]
    double b_max = 0.0;       ///< shareable space [kWh]
    double r = 0.0;           ///< reservation price [currency/kWh]
    double alpha = 0.0;       ///< reluctance [currency/kWh^2]
};

/// Buyer of storage space.
struct FacilityController {
    std::string id;
    double a = 0.0;  ///< bid price [currency/kWh]
    double q = 0.0;  ///< required storage [kWh]
};

enum class DemandMode { Uniform, Schedule, ScheduleTotal };

/// Per-slot SFC requirement process for the time-varying case.
struct DemandModel {
    DemandMode mode = DemandMode::Uniform;
    double lo = 0.0;  ///< Uniform: inclusive lower bound [kWh]
    double hi = 0.0;  ///< Uniform: inclusive upper bound [kWh]
    std::vector<std::vector<double>> matrix;  ///< Schedule: [slot][sfc] requirement
    std::vector<double> totals;  ///< ScheduleTotal: per-slot total, split by base q share
};

struct TemporalConfig {
    std::size_t horizon = 1;
    DemandModel demand;
    /// Per-slot multipliers applied to every reservation/bid price (time-of-use style).
    std::vector<double> tou_r;
    std::vector<double> tou_a;
    /// Absolute per-slot prices, [slot][agent] in file order; override the multipliers.
    std::vector<std::vector<double>> r_schedule;
    std::vector<std::vector<double>> a_schedule;
    /// Keep consumed storage out of the market for the rest of the horizon.
    bool lock_consumed = true;
};

struct ScenarioConfig {
    std::optional<double> sweep_step;  ///< absent: (p_max - p_min) / 1000
    PriceFloorRule price_floor_rule = PriceFloorRule::SecondHighestIncluded;
    BurdenRule burden_rule = BurdenRule::Equal;
    double fit_price = 22.0;
    std::uint64_t seed = 1;
};

/// A validated market instance. RUs are kept ascending by reservation price,
/// SFCs descending by bid; all prices are one abstract currency unit per kWh.
struct MarketScenario {
    std::vector<ResidentialUnit> rus;
    std::vector<FacilityController> sfcs;
    ScenarioConfig config;
    std::optional<TemporalConfig> temporal;
};

/// Parses and validates a scenario document (JSON, order-insensitive keys).
/// Throws ParseError on malformed input and ValidationError on bad data.
MarketScenario load_scenario(const std::string& text);
MarketScenario load_scenario_file(const std::string& path);

/// Canonical document for the given scenario; load_scenario(serialize(s)) == s.
std::string serialize(const MarketScenario& scenario);

/// Every violated invariant, one entry per violation; empty means valid.
std::vector<Violation> validate(const MarketScenario& scenario);

const char* to_string(PriceFloorRule rule);
const char* to_string(BurdenRule rule);
const char* to_string(DemandMode mode);
PriceFloorRule price_floor_rule_from_string(const std::string& s);
BurdenRule burden_rule_from_string(const std::string& s);
DemandMode demand_mode_from_string(const std::string& s);

}  // namespace esshare
