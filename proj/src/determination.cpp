#include "esshare/determination.hpp"

#include <functional>
#include <string>

namespace esshare {

namespace {

StepCurve build_curve(CurveKind kind, std::size_t n,
                      const std::function<double(std::size_t)>& price,
                      const std::function<double(std::size_t)>& qty) {
    if (n == 0) {
        throw Error(kind == CurveKind::Supply ? "supply curve: empty RU list"
                                              : "demand curve: empty SFC list");
    }
    StepCurve curve;
    curve.kind = kind;
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double amount = qty(i);
        if (amount < 0.0) {
            throw Error("curve quantity must be nonnegative");
        }
        if (amount == 0.0) {
            continue;  // zero-width segments would break strict monotonicity
        }
        const double p = price(i);
        if (!curve.points.empty()) {
            const double prev = curve.points.back().price;
            const bool ordered = kind == CurveKind::Supply ? p >= prev : p <= prev;
            if (!ordered) {
                throw Error("curve prices out of order: agents must be price-sorted");
            }
        }
        cum += amount;
        curve.points.push_back({cum, p, i});
    }
    return curve;
}

}  // namespace

StepCurve build_supply_curve(std::span<const ResidentialUnit> rus) {
    return build_curve(
        CurveKind::Supply, rus.size(), [&](std::size_t i) { return rus[i].r; },
        [&](std::size_t i) { return rus[i].b_max; });
}

StepCurve build_supply_curve(std::span<const ResidentialUnit> rus, std::span<const double> qty) {
    if (qty.size() != rus.size()) {
        throw Error("supply curve: one quantity per RU required");
    }
    return build_curve(
        CurveKind::Supply, rus.size(), [&](std::size_t i) { return rus[i].r; },
        [&](std::size_t i) { return qty[i]; });
}

StepCurve build_demand_curve(std::span<const FacilityController> sfcs) {
    return build_curve(
        CurveKind::Demand, sfcs.size(), [&](std::size_t i) { return sfcs[i].a; },
        [&](std::size_t i) { return sfcs[i].q; });
}

StepCurve build_demand_curve(std::span<const FacilityController> sfcs, std::span<const double> qty) {
    if (qty.size() != sfcs.size()) {
        throw Error("demand curve: one quantity per SFC required");
    }
    return build_curve(
        CurveKind::Demand, sfcs.size(), [&](std::size_t i) { return sfcs[i].a; },
        [&](std::size_t i) { return qty[i]; });
}

DeterminationOutcome determine(const StepCurve& supply, const StepCurve& demand,
                               PriceFloorRule floor_rule) {
    if (supply.points.empty() || demand.points.empty()) {
        throw InsufficientParticipantsError("determination: a market side is empty");
    }
    if (demand.points.front().price < supply.points.front().price) {
        throw NoIntersectionError("no intersection: highest bid " +
                                  std::to_string(demand.points.front().price) +
                                  " is below lowest reservation price " +
                                  std::to_string(supply.points.front().price));
    }

    std::size_t jj = 0;
    std::size_t kk = 0;
    std::size_t last_j = 0;
    std::size_t last_k = 0;
    while (jj < supply.points.size() && kk < demand.points.size() &&
           demand.points[kk].price >= supply.points[jj].price) {
        last_j = jj;
        last_k = kk;
        const double cs = supply.points[jj].cum_qty;
        const double cd = demand.points[kk].cum_qty;
        if (cs < cd) {
            ++jj;
        } else if (cs > cd) {
            ++kk;
        } else {
            ++jj;
            ++kk;
        }
    }

    DeterminationOutcome out;
    out.j = last_j + 1;
    out.k = last_k + 1;
    if (out.j < 2 || out.k < 2) {
        throw InsufficientParticipantsError(
            "determination: participant cut leaves J=" + std::to_string(out.j) +
            ", K=" + std::to_string(out.k) + " (both must be at least 2)");
    }
    out.participants_ru.reserve(out.j - 1);
    for (std::size_t i = 0; i + 1 < out.j; ++i) {
        out.participants_ru.push_back(supply.points[i].agent);
    }
    out.participants_sfc.reserve(out.k - 1);
    for (std::size_t i = 0; i + 1 < out.k; ++i) {
        out.participants_sfc.push_back(demand.points[i].agent);
    }
    out.p_max = supply.points[out.j - 1].price;
    switch (floor_rule) {
        case PriceFloorRule::SecondHighestIncluded:
            out.p_min = supply.points[out.j - 2].price;
            break;
        case PriceFloorRule::SecondLowest:
            out.p_min = out.j >= 3 ? supply.points[1].price : supply.points[out.j - 2].price;
            break;
        case PriceFloorRule::FirstExcluded:
            out.p_min = out.p_max;
            break;
    }
    return out;
}

DeterminationOutcome determine(const MarketScenario& scenario) {
    const auto supply = build_supply_curve(scenario.rus);
    const auto demand = build_demand_curve(scenario.sfcs);
    return determine(supply, demand, scenario.config.price_floor_rule);
}

}  // namespace esshare
