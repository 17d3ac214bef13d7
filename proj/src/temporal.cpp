#include "esshare/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace esshare {

std::vector<double> advance_offers(const SlotState& prev) {
    const std::size_t n = prev.offers.size();
    if (prev.available.size() != n || prev.burdens_prev.size() != n ||
        prev.participated_prev.size() != n) {
        throw Error("advance_offers: slot state vectors must have one entry per RU");
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!prev.participated_prev[i]) {
            next[i] = prev.offers[i];
        } else {
            const double consumed = prev.offers[i] - prev.burdens_prev[i];
            next[i] = std::max(prev.available[i] - consumed, 0.0);
        }
    }
    return next;
}

double uniform_draw(std::uint64_t raw, double lo, double hi) {
    const double unit = static_cast<double>(raw >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

std::vector<double> sample_demand(std::mt19937_64& gen, const DemandModel& model,
                                  std::size_t slot, std::span<const FacilityController> sfcs) {
    std::vector<double> q(sfcs.size(), 0.0);
    switch (model.mode) {
        case DemandMode::Uniform: {
            if (model.lo > model.hi) {
                throw Error("sample_demand: empty uniform range");
            }
            for (auto& v : q) {
                v = uniform_draw(gen(), model.lo, model.hi);
            }
            break;
        }
        case DemandMode::Schedule: {
            if (slot >= model.matrix.size() || model.matrix[slot].size() != sfcs.size()) {
                throw Error("sample_demand: schedule row missing for slot " +
                            std::to_string(slot + 1));
            }
            q = model.matrix[slot];
            break;
        }
        case DemandMode::ScheduleTotal: {
            if (slot >= model.totals.size()) {
                throw Error("sample_demand: total missing for slot " + std::to_string(slot + 1));
            }
            const double total = model.totals[slot];
            double base = 0.0;
            for (const auto& sfc : sfcs) base += sfc.q;
            for (std::size_t m = 0; m < sfcs.size(); ++m) {
                q[m] = base > 0.0 ? total * sfcs[m].q / base
                                  : total / static_cast<double>(sfcs.size());
            }
            break;
        }
    }
    return q;
}

namespace {

struct SlotPrices {
    std::vector<double> r;  // per RU, scenario order
    std::vector<double> a;  // per SFC, scenario order
};

SlotPrices prices_for_slot(const MarketScenario& scenario, std::size_t t) {
    SlotPrices prices;
    prices.r.resize(scenario.rus.size());
    prices.a.resize(scenario.sfcs.size());
    const TemporalConfig* tc = scenario.temporal ? &*scenario.temporal : nullptr;
    for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
        if (tc && !tc->r_schedule.empty()) {
            prices.r[i] = tc->r_schedule[t][i];
        } else if (tc && !tc->tou_r.empty()) {
            prices.r[i] = scenario.rus[i].r * tc->tou_r[t];
        } else {
            prices.r[i] = scenario.rus[i].r;
        }
    }
    for (std::size_t m = 0; m < scenario.sfcs.size(); ++m) {
        if (tc && !tc->a_schedule.empty()) {
            prices.a[m] = tc->a_schedule[t][m];
        } else if (tc && !tc->tou_a.empty()) {
            prices.a[m] = scenario.sfcs[m].a * tc->tou_a[t];
        } else {
            prices.a[m] = scenario.sfcs[m].a;
        }
    }
    return prices;
}

}  // namespace

TimeSeriesTrace simulate(const MarketScenario& scenario) {
    const std::size_t n = scenario.rus.size();
    const std::size_t m = scenario.sfcs.size();
    const std::size_t horizon = scenario.temporal ? scenario.temporal->horizon : 1;
    const bool lock_consumed = scenario.temporal ? scenario.temporal->lock_consumed : true;

    std::mt19937_64 gen(scenario.config.seed);

    std::vector<double> offers(n);
    std::vector<double> avail(n);
    for (std::size_t i = 0; i < n; ++i) {
        offers[i] = scenario.rus[i].b_max;
        avail[i] = scenario.rus[i].b_max;
    }

    TimeSeriesTrace trace;
    trace.slots.reserve(horizon);

    for (std::size_t t = 0; t < horizon; ++t) {
        const SlotPrices prices = prices_for_slot(scenario, t);

        std::vector<double> demands;
        if (scenario.temporal) {
            demands = sample_demand(gen, scenario.temporal->demand, t, scenario.sfcs);
        } else {
            demands.resize(m);
            for (std::size_t i = 0; i < m; ++i) demands[i] = scenario.sfcs[i].q;
        }

        SlotRecord rec;
        rec.t = t + 1;
        rec.available = avail;
        rec.offered = offers;
        rec.shared.assign(n, 0.0);
        rec.burdens.assign(n, 0.0);
        rec.utilities.assign(n, 0.0);
        rec.participated.assign(n, 0);
        rec.demands = demands;

        // Slot view of the market: per-slot prices, the posted offer caps the
        // game strategy space.
        std::vector<ResidentialUnit> slot_rus(scenario.rus.begin(), scenario.rus.end());
        for (std::size_t i = 0; i < n; ++i) {
            slot_rus[i].r = prices.r[i];
            slot_rus[i].b_max = offers[i];
        }
        std::vector<FacilityController> slot_sfcs(scenario.sfcs.begin(), scenario.sfcs.end());
        for (std::size_t i = 0; i < m; ++i) {
            slot_sfcs[i].a = prices.a[i];
            slot_sfcs[i].q = demands[i];
        }

        std::vector<std::size_t> supply_order(n);
        std::iota(supply_order.begin(), supply_order.end(), 0);
        std::stable_sort(supply_order.begin(), supply_order.end(),
                         [&](std::size_t x, std::size_t y) { return slot_rus[x].r < slot_rus[y].r; });
        std::vector<std::size_t> demand_order(m);
        std::iota(demand_order.begin(), demand_order.end(), 0);
        std::stable_sort(demand_order.begin(), demand_order.end(),
                         [&](std::size_t x, std::size_t y) { return slot_sfcs[x].a > slot_sfcs[y].a; });

        std::vector<ResidentialUnit> ordered_rus;
        std::vector<double> ordered_qty;
        ordered_rus.reserve(n);
        for (std::size_t idx : supply_order) {
            ordered_rus.push_back(slot_rus[idx]);
            ordered_qty.push_back(offers[idx]);
        }
        std::vector<FacilityController> ordered_sfcs;
        std::vector<double> ordered_demand;
        ordered_sfcs.reserve(m);
        for (std::size_t idx : demand_order) {
            ordered_sfcs.push_back(slot_sfcs[idx]);
            ordered_demand.push_back(demands[idx]);
        }

        SlotState state{t, offers, avail, rec.burdens, rec.participated};

        try {
            const auto supply = build_supply_curve(ordered_rus, ordered_qty);
            const auto demand = build_demand_curve(ordered_sfcs, ordered_demand);
            const auto det = determine(supply, demand, scenario.config.price_floor_rule);

            std::vector<ResidentialUnit> engaged;
            std::vector<std::size_t> engaged_idx;  // scenario RU indices
            for (std::size_t pos : det.participants_ru) {
                engaged.push_back(ordered_rus[pos]);
                engaged_idx.push_back(supply_order[pos]);
            }
            std::vector<FacilityController> buyers;
            for (std::size_t pos : det.participants_sfc) {
                buyers.push_back(ordered_sfcs[pos]);
            }

            const auto eq = equilibrium(det, engaged, buyers, scenario.config.sweep_step);

            std::vector<double> buyer_demand;
            for (const auto& sfc : buyers) buyer_demand.push_back(sfc.q);
            std::vector<double> reserves;
            for (const auto& ru : engaged) reserves.push_back(ru.r);
            const auto alloc =
                allocate(eq.x_star, buyer_demand, scenario.config.burden_rule, reserves);

            rec.p_star = eq.p_star;
            rec.z_star = eq.z_star;
            rec.j = det.j;
            rec.k = det.k;
            for (std::size_t i = 0; i < engaged.size(); ++i) {
                const std::size_t idx = engaged_idx[i];
                rec.participated[idx] = 1;
                rec.shared[idx] = alloc.shared[i];
                rec.burdens[idx] = alloc.burdens[i];
                rec.utilities[idx] = utility(engaged[i], alloc.shared[i], eq.p_star);
                state.offers[idx] = eq.x_star[i];  // the amount actually put on the market
                state.burdens_prev[idx] = alloc.burdens[i];
                state.participated_prev[idx] = 1;
            }
            rec.burdens = state.burdens_prev;
            rec.participated = state.participated_prev;
        } catch (const NoIntersectionError& e) {
            rec.skipped = true;
            rec.skip_reason = e.what();
        } catch (const InsufficientParticipantsError& e) {
            rec.skipped = true;
            rec.skip_reason = e.what();
        }

        trace.slots.push_back(rec);

        offers = advance_offers(state);
        if (lock_consumed) {
            for (std::size_t i = 0; i < n; ++i) {
                if (state.participated_prev[i]) {
                    const double consumed = state.offers[i] - state.burdens_prev[i];
                    avail[i] = std::max(avail[i] - consumed, 0.0);
                }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                avail[i] = scenario.rus[i].b_max;
            }
        }
    }

    return trace;
}

}  // namespace esshare
