#include "esshare/engine.hpp"

namespace esshare {

AuctionRun run_auction(const MarketScenario& scenario) {
    AuctionRun run;
    run.det = determine(scenario);

    run.participants.reserve(run.det.participants_ru.size());
    for (std::size_t idx : run.det.participants_ru) {
        run.participants.push_back(scenario.rus[idx]);
    }
    run.buyers.reserve(run.det.participants_sfc.size());
    for (std::size_t idx : run.det.participants_sfc) {
        run.buyers.push_back(scenario.sfcs[idx]);
    }

    run.eq = equilibrium(run.det, run.participants, run.buyers, scenario.config.sweep_step);

    std::vector<double> demands;
    demands.reserve(run.buyers.size());
    for (const auto& sfc : run.buyers) {
        demands.push_back(sfc.q);
    }
    std::vector<double> reserves;
    reserves.reserve(run.participants.size());
    for (const auto& ru : run.participants) {
        reserves.push_back(ru.r);
    }
    run.alloc = allocate(run.eq.x_star, demands, scenario.config.burden_rule, reserves);

    run.realized_utilities.resize(run.participants.size());
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        run.realized_utilities[i] =
            utility(run.participants[i], run.alloc.shared[i], run.eq.p_star);
    }
    return run;
}

}  // namespace esshare
