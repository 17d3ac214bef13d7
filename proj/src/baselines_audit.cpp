#include "esshare/baselines_audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace esshare {

namespace {

double average_over(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

std::vector<double> expand_to_scenario(const MarketScenario& scenario, const AuctionRun& run,
                                       std::span<const double> per_participant) {
    std::vector<double> out(scenario.rus.size(), 0.0);
    for (std::size_t i = 0; i < run.det.participants_ru.size(); ++i) {
        out[run.det.participants_ru[i]] = per_participant[i];
    }
    return out;
}

}  // namespace

SchemeUtilities proposed_utilities(const MarketScenario& scenario, const AuctionRun& run) {
    SchemeUtilities out;
    out.per_ru = expand_to_scenario(scenario, run, run.realized_utilities);
    out.average = average_over(out.per_ru);
    return out;
}

SchemeUtilities run_ed(const MarketScenario& scenario, const AuctionRun& run) {
    double demand_total = 0.0;
    for (const auto& sfc : run.buyers) demand_total += sfc.q;
    const double per_head = demand_total / static_cast<double>(run.participants.size());

    std::vector<double> utilities(run.participants.size());
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        const double share = std::min(per_head, run.eq.x_star[i]);
        utilities[i] = utility(run.participants[i], share, run.eq.p_star);
    }

    SchemeUtilities out;
    out.per_ru = expand_to_scenario(scenario, run, utilities);
    out.average = average_over(out.per_ru);
    return out;
}

SchemeUtilities run_fit(const MarketScenario& scenario, const AuctionRun& run) {
    std::vector<double> utilities(run.participants.size());
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        utilities[i] = utility(run.participants[i], run.eq.x_star[i], scenario.config.fit_price);
    }

    SchemeUtilities out;
    out.per_ru = expand_to_scenario(scenario, run, utilities);
    out.average = average_over(out.per_ru);
    return out;
}

void check_individual_rationality(const AuctionRun& run, AuditReport& report) {
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        if (run.eq.utilities[i] < 0.0) {
            report.ir_violations.push_back({run.participants[i].id,
                                            "negative net benefit at the auction price",
                                            run.eq.utilities[i]});
        }
    }
    for (const auto& sfc : run.buyers) {
        const double margin = sfc.a - run.eq.p_star;
        if (margin < 0.0) {
            report.ir_violations.push_back(
                {sfc.id, "bid below the auction price", margin});
        }
    }
}

namespace {

// Runs the pipeline on a declaration vector: determination uses the declared
// reservation prices, while best responses and scoring keep true parameters.
// Returns the deviator's realized utility (zero when it ends outside the cut
// or the slot is infeasible).
double realized_under_declaration(const MarketScenario& scenario, std::size_t deviator,
                                  double declared_r) {
    std::vector<ResidentialUnit> declared(scenario.rus.begin(), scenario.rus.end());
    declared[deviator].r = declared_r;
    std::vector<std::size_t> order(declared.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return declared[a].r < declared[b].r;
    });

    std::vector<ResidentialUnit> ordered;   // declared view, for determination
    ordered.reserve(order.size());
    for (std::size_t idx : order) ordered.push_back(declared[idx]);

    try {
        const auto supply = build_supply_curve(ordered);
        const auto demand = build_demand_curve(scenario.sfcs);
        const auto det = determine(supply, demand, scenario.config.price_floor_rule);

        std::vector<ResidentialUnit> engaged;     // true parameters drive the game
        std::size_t deviator_pos = ordered.size();
        for (std::size_t i = 0; i < det.participants_ru.size(); ++i) {
            const std::size_t scenario_idx = order[det.participants_ru[i]];
            ResidentialUnit ru = scenario.rus[scenario_idx];
            if (scenario_idx == deviator) {
                deviator_pos = i;
            }
            engaged.push_back(ru);
        }
        if (deviator_pos == ordered.size()) {
            return 0.0;  // deviation pushed the RU out of the cut
        }
        std::vector<FacilityController> buyers;
        for (std::size_t idx : det.participants_sfc) {
            buyers.push_back(scenario.sfcs[idx]);
        }

        const auto eq = equilibrium(det, engaged, buyers, scenario.config.sweep_step);

        std::vector<double> demands;
        for (const auto& sfc : buyers) demands.push_back(sfc.q);
        std::vector<double> declared_reserves;  // the auctioneer only sees declarations
        for (std::size_t i = 0; i < det.participants_ru.size(); ++i) {
            declared_reserves.push_back(ordered[det.participants_ru[i]].r);
        }
        const auto alloc =
            allocate(eq.x_star, demands, scenario.config.burden_rule, declared_reserves);

        return utility(engaged[deviator_pos], alloc.shared[deviator_pos], eq.p_star);
    } catch (const NoIntersectionError&) {
        return 0.0;
    } catch (const InsufficientParticipantsError&) {
        return 0.0;
    }
}

}  // namespace

void check_incentive_compatibility(const MarketScenario& scenario, std::size_t grid_size,
                                   double relative_tolerance, AuditReport& report) {
    report.tolerance = relative_tolerance;
    if (grid_size == 0) {
        return;
    }

    std::vector<double> truthful(scenario.rus.size(), 0.0);
    try {
        const auto run = run_auction(scenario);
        truthful = proposed_utilities(scenario, run).per_ru;
    } catch (const NoIntersectionError&) {
    } catch (const InsufficientParticipantsError&) {
    }

    for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
        const double r_true = scenario.rus[i].r;
        for (std::size_t g = 0; g < grid_size; ++g) {
            const double fraction =
                grid_size == 1 ? 1.0
                               : 0.5 + static_cast<double>(g) / static_cast<double>(grid_size - 1);
            const double declared_r = r_true * fraction;

            bool collides = false;  // tied declarations are rejected by the model
            for (std::size_t j = 0; j < scenario.rus.size(); ++j) {
                if (j != i && scenario.rus[j].r == declared_r) {
                    collides = true;
                    break;
                }
            }
            if (collides || !(declared_r > 0.0)) {
                continue;
            }

            const double realized = realized_under_declaration(scenario, i, declared_r);
            const double gain = realized - truthful[i];
            const double scale = std::max(1.0, std::abs(truthful[i]));
            if (gain > relative_tolerance * scale) {
                report.ic_violations.push_back({scenario.rus[i].id, declared_r, gain});
            }
        }
    }
}

ComparisonReport compare(const MarketScenario& scenario, std::span<const double> demand_totals) {
    ComparisonReport report;
    double base_total = 0.0;
    for (const auto& sfc : scenario.sfcs) base_total += sfc.q;

    for (double total : demand_totals) {
        MarketScenario scaled = scenario;
        for (auto& sfc : scaled.sfcs) {
            sfc.q = base_total > 0.0 ? sfc.q * total / base_total
                                     : total / static_cast<double>(scaled.sfcs.size());
        }

        ComparisonRow row;
        row.total_q = total;
        try {
            const auto run = run_auction(scaled);
            const auto proposed = proposed_utilities(scaled, run);
            const auto ed = run_ed(scaled, run);
            const auto fit = run_fit(scaled, run);
            row.avg_proposed = proposed.average;
            row.avg_ed = ed.average;
            row.avg_fit = fit.average;
            row.per_ru_proposed = proposed.per_ru;
            row.per_ru_ed = ed.per_ru;
            row.per_ru_fit = fit.per_ru;
            row.improvement_vs_ed_pct =
                row.avg_ed != 0.0 ? 100.0 * (row.avg_proposed - row.avg_ed) / row.avg_ed : 0.0;
            row.improvement_vs_fit_pct =
                row.avg_fit != 0.0 ? 100.0 * (row.avg_proposed - row.avg_fit) / row.avg_fit : 0.0;
            for (std::size_t i = 0; i < run.participants.size(); ++i) {
                if (scaled.config.fit_price < run.participants[i].r) {
                    report.notes.push_back("fit price below reservation price of RU " +
                                           run.participants[i].id + " at total demand " +
                                           std::to_string(total));
                }
            }
        } catch (const NoIntersectionError& e) {
            row.feasible = false;
            report.notes.push_back("total demand " + std::to_string(total) + ": " + e.what());
        } catch (const InsufficientParticipantsError& e) {
            row.feasible = false;
            report.notes.push_back("total demand " + std::to_string(total) + ": " + e.what());
        }
        if (!row.feasible) {
            row.per_ru_proposed.assign(scenario.rus.size(), 0.0);
            row.per_ru_ed.assign(scenario.rus.size(), 0.0);
            row.per_ru_fit.assign(scenario.rus.size(), 0.0);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<AlphaSweepRow> alpha_sweep(const MarketScenario& scenario,
                                       std::span<const double> alphas) {
    std::vector<AlphaSweepRow> rows;
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) {
            throw Error("alpha_sweep: reluctance values must be positive");
        }
        MarketScenario adjusted = scenario;
        for (auto& ru : adjusted.rus) ru.alpha = alpha;

        AlphaSweepRow row;
        row.alpha = alpha;
        const auto run = run_auction(adjusted);
        row.avg_ru_utility = proposed_utilities(adjusted, run).average;
        row.avg_sfc_saving = run.eq.z_star;
        rows.push_back(row);
    }
    if (!rows.empty()) {
        const double ru_base = rows.front().avg_ru_utility;
        const double sfc_base = rows.front().avg_sfc_saving;
        for (auto& row : rows) {
            row.ru_change_pct =
                ru_base != 0.0 ? 100.0 * (row.avg_ru_utility - ru_base) / ru_base : 0.0;
            row.sfc_change_pct =
                sfc_base != 0.0 ? 100.0 * (row.avg_sfc_saving - sfc_base) / sfc_base : 0.0;
        }
    }
    return rows;
}

}  // namespace esshare
