#include "esshare/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "esshare/report.hpp"

namespace esshare {

namespace {

void apply_overrides(MarketScenario& scenario, const RunOverrides& overrides) {
    if (overrides.sweep_step) scenario.config.sweep_step = *overrides.sweep_step;
    if (overrides.price_floor_rule) scenario.config.price_floor_rule = *overrides.price_floor_rule;
    if (overrides.burden_rule) scenario.config.burden_rule = *overrides.burden_rule;
    if (overrides.fit_price) scenario.config.fit_price = *overrides.fit_price;
    if (overrides.seed) scenario.config.seed = *overrides.seed;
    if (overrides.horizon) {
        if (!scenario.temporal) {
            // Constant prices, per-slot demand equal to the base requirements.
            TemporalConfig tc;
            tc.horizon = *overrides.horizon;
            tc.demand.mode = DemandMode::Schedule;
            std::vector<double> base;
            for (const auto& sfc : scenario.sfcs) base.push_back(sfc.q);
            tc.demand.matrix.assign(tc.horizon, base);
            scenario.temporal = tc;
        } else {
            scenario.temporal->horizon = *overrides.horizon;
        }
    }

    auto violations = validate(scenario);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
}

int run_auction_cmd(const RunConfig& config, const MarketScenario& scenario) {
    const AuctionRun run = run_auction(scenario);
    write_text_file(out_path(config, "summary.json"), auction_summary_json(scenario, run));
    write_text_file(out_path(config, "trace.csv"), trace_csv(run));
    write_text_file(out_path(config, "allocation.csv"), allocation_csv(run));
    const auto pairs = pair_allocations(run.buyers, run.participants, run.alloc.shared);
    write_text_file(out_path(config, "pairing.csv"), pairing_csv(pairs));
    if (!config.quiet) {
        std::cout << "auction: p*=" << fmt6(run.eq.p_star) << " Z*=" << fmt6(run.eq.z_star)
                  << " participants=" << run.participants.size() << "/" << run.buyers.size()
                  << " regime=" << (run.eq.boundary_regime ? "boundary" : "interior") << "\n";
    }
    return kExitOk;
}

int run_curves_cmd(const RunConfig& config, const MarketScenario& scenario) {
    const auto supply = build_supply_curve(scenario.rus);
    const auto demand = build_demand_curve(scenario.sfcs);
    const auto det = determine(supply, demand, scenario.config.price_floor_rule);
    write_text_file(out_path(config, "curves.csv"), curves_csv(supply, demand, det));
    write_text_file(out_path(config, "summary.json"), curves_summary_json(det));
    if (!config.quiet) {
        std::cout << "curves-dump: J=" << det.j << " K=" << det.k << " p_min=" << fmt6(det.p_min)
                  << " p_max=" << fmt6(det.p_max) << "\n";
    }
    return kExitOk;
}

int run_timeseries_cmd(const RunConfig& config, const MarketScenario& scenario) {
    const TimeSeriesTrace trace = simulate(scenario);
    write_text_file(out_path(config, "summary.json"), timeseries_summary_json(scenario, trace));
    write_text_file(out_path(config, "timeseries.csv"), timeseries_csv(scenario, trace));
    write_text_file(out_path(config, "timeseries_slots.csv"), timeseries_slots_csv(trace));
    std::size_t executed = 0;
    for (const auto& slot : trace.slots) {
        if (!slot.skipped) ++executed;
    }
    if (!config.quiet) {
        std::cout << "timeseries: " << executed << "/" << trace.slots.size()
                  << " slots executed\n";
    }
    return kExitOk;
}

int run_compare_cmd(const RunConfig& config, const MarketScenario& scenario) {
    std::vector<double> totals = config.demand_sweep;
    if (totals.empty()) {
        totals = {200.0, 250.0, 300.0, 350.0, 400.0, 450.0};
    }
    const ComparisonReport report = compare(scenario, totals);
    std::vector<AlphaSweepRow> alpha_rows;
    if (!config.alphas.empty()) {
        alpha_rows = alpha_sweep(scenario, config.alphas);
        write_text_file(out_path(config, "reluctance.csv"), reluctance_csv(alpha_rows));
    }
    write_text_file(out_path(config, "summary.json"), compare_summary_json(report, alpha_rows));
    write_text_file(out_path(config, "comparison.csv"), comparison_csv(report));
    if (!config.quiet) {
        std::cout << "compare:\n  total_q  proposed        ed       fit\n";
        for (const auto& row : report.rows) {
            std::printf("  %7s %9s %9s %9s\n", fmt6(row.total_q).c_str(),
                        fmt6(row.avg_proposed).c_str(), fmt6(row.avg_ed).c_str(),
                        fmt6(row.avg_fit).c_str());
        }
    }
    return kExitOk;
}

int run_audit_cmd(const RunConfig& config, const MarketScenario& scenario) {
    AuditReport report;
    report.tolerance = config.audit_tolerance;
    const AuctionRun truthful = run_auction(scenario);
    check_individual_rationality(truthful, report);
    check_incentive_compatibility(scenario, config.audit_grid, config.audit_tolerance, report);
    write_text_file(out_path(config, "summary.json"), audit_summary_json(report));
    write_text_file(out_path(config, "audit.csv"), audit_csv(report));
    if (!config.quiet) {
        std::cout << "audit: ir_violations=" << report.ir_violations.size()
                  << " ic_violations=" << report.ic_violations.size() << " (tolerance "
                  << fmt6(report.tolerance) << ")\n";
        for (const auto& v : report.ir_violations) {
            std::cout << "  IR " << v.agent_id << ": " << v.what << " (" << fmt6(v.value)
                      << ")\n";
        }
        for (const auto& v : report.ic_violations) {
            std::cout << "  IC " << v.ru_id << ": declared r=" << fmt6(v.misreported_r)
                      << " gain=" << fmt6(v.gain) << "\n";
        }
    }
    return report.passed() ? kExitOk : kExitAuditViolation;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        MarketScenario scenario = load_scenario_file(config.scenario_path);
        apply_overrides(scenario, config.overrides);
        std::filesystem::create_directories(config.output_dir);
        switch (config.subcommand) {
            case Subcommand::Auction: return run_auction_cmd(config, scenario);
            case Subcommand::CurvesDump: return run_curves_cmd(config, scenario);
            case Subcommand::Timeseries: return run_timeseries_cmd(config, scenario);
            case Subcommand::Compare: return run_compare_cmd(config, scenario);
            case Subcommand::Audit: return run_audit_cmd(config, scenario);
        }
        return kExitOk;
    } catch (const ParseError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NoIntersectionError& e) {
        std::cerr << "determination: " << e.what() << "\n";
        return kExitNoIntersection;
    } catch (const InsufficientParticipantsError& e) {
        std::cerr << "determination: " << e.what() << "\n";
        return kExitNoIntersection;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace esshare
