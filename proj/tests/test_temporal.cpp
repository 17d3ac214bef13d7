#include <random>

#include "doctest.h"
#include "esshare/temporal.hpp"
#include "helpers.hpp"

using namespace esshare;
using testutil::make_scenario;
using testutil::ru;
using testutil::sfc;

namespace {

SlotState state_of(std::vector<double> offers, std::vector<double> available,
                   std::vector<double> burdens, std::vector<char> participated) {
    SlotState st;
    st.offers = std::move(offers);
    st.available = std::move(available);
    st.burdens_prev = std::move(burdens);
    st.participated_prev = std::move(participated);
    return st;
}

// Four-slot fixture with per-slot prices steering who participates; RU3 is the
// single seller in slot 2 where it oversupplies a 250 kWh requirement by 50.
MarketScenario depletion_scenario() {
    auto scenario = make_scenario(
        {ru("ru1", 20, 0.001, 100), ru("ru2", 21, 0.001, 200), ru("ru3", 22, 0.001, 300),
         ru("ru4", 23, 0.001, 200), ru("ru5", 24, 0.001, 200)},
        {sfc("sfcA", 100, 300), sfc("sfcB", 90, 200)});
    TemporalConfig tc;
    tc.horizon = 4;
    tc.demand.mode = DemandMode::Schedule;
    tc.demand.matrix = {{450, 50}, {250, 100}, {400, 100}, {90, 10}};
    tc.r_schedule = {{20, 21, 30, 35, 40},
                     {50, 51, 22, 30, 40},
                     {50, 51, 22, 25, 30},
                     {50, 51, 60, 61, 22}};
    tc.a_schedule = {{100, 90}, {100, 90}, {100, 90}, {100, 90}};
    scenario.temporal = tc;
    return scenario;
}

}  // namespace

TEST_CASE("offer dynamics between slots") {
    SUBCASE("non-participant keeps its posted offer") {
        const auto st = state_of({80.0}, {100.0}, {0.0}, {0});
        CHECK(advance_offers(st) == std::vector<double>{80.0});
    }
    SUBCASE("participant re-offers the burdened remainder") {
        const auto st = state_of({100.0}, {100.0}, {50.0}, {1});
        CHECK(advance_offers(st) == std::vector<double>{50.0});
    }
    SUBCASE("fully consumed space leaves nothing to offer") {
        const auto st = state_of({100.0}, {100.0}, {0.0}, {1});
        CHECK(advance_offers(st) == std::vector<double>{0.0});
    }
}

TEST_CASE("demand sampling modes") {
    std::vector<FacilityController> one{sfc("m", 60, 100)};
    std::mt19937_64 gen(7);

    SUBCASE("fixed schedule of totals") {
        DemandModel model;
        model.mode = DemandMode::ScheduleTotal;
        model.totals = {500, 250, 500, 100};
        CHECK(sample_demand(gen, model, 1, one) == std::vector<double>{250.0});
    }
    SUBCASE("degenerate uniform range") {
        DemandModel model;
        model.mode = DemandMode::Uniform;
        model.lo = model.hi = 100.0;
        CHECK(sample_demand(gen, model, 0, one) == std::vector<double>{100.0});
    }
    SUBCASE("uniform draws repeat under the same seed") {
        DemandModel model;
        model.mode = DemandMode::Uniform;
        model.lo = 100.0;
        model.hi = 500.0;
        std::mt19937_64 g1(7);
        std::mt19937_64 g2(7);
        const auto first = sample_demand(g1, model, 0, one);
        const auto second = sample_demand(g1, model, 1, one);
        CHECK(sample_demand(g2, model, 0, one) == first);
        CHECK(sample_demand(g2, model, 1, one) == second);
        CHECK(first[0] >= 100.0);
        CHECK(first[0] <= 500.0);
    }
    SUBCASE("totals split by base requirement share") {
        DemandModel model;
        model.mode = DemandMode::ScheduleTotal;
        model.totals = {300};
        std::vector<FacilityController> two{sfc("m1", 60, 100), sfc("m2", 50, 200)};
        CHECK(sample_demand(gen, model, 0, two) == std::vector<double>{100.0, 200.0});
    }
    SUBCASE("inverted uniform range is an error") {
        DemandModel model;
        model.mode = DemandMode::Uniform;
        model.lo = 10.0;
        model.hi = 5.0;
        CHECK_THROWS_AS(sample_demand(gen, model, 0, one), Error);
    }
}

TEST_CASE("single-slot simulation matches the static pipeline") {
    auto scenario = make_scenario(
        {ru("r1", 20, 0.05, 150), ru("r2", 26, 0.05, 150), ru("r3", 32, 0.05, 150)},
        {sfc("m1", 70, 200), sfc("m2", 60, 120)});
    const auto run = run_auction(scenario);
    const auto trace = simulate(scenario);

    REQUIRE(trace.slots.size() == 1);
    const auto& slot = trace.slots.front();
    REQUIRE_FALSE(slot.skipped);
    CHECK(slot.p_star == run.eq.p_star);
    CHECK(slot.z_star == run.eq.z_star);
    for (std::size_t i = 0; i < run.det.participants_ru.size(); ++i) {
        const std::size_t idx = run.det.participants_ru[i];
        CHECK(slot.shared[idx] == run.alloc.shared[i]);
        CHECK(slot.burdens[idx] == run.alloc.burdens[i]);
        CHECK(slot.utilities[idx] == run.realized_utilities[i]);
    }
}

TEST_CASE("burdened space returns to the market one slot later") {
    const auto scenario = depletion_scenario();
    const auto trace = simulate(scenario);
    REQUIRE(trace.slots.size() == 4);

    // Slot 1: the two cheapest RUs clear everything they have.
    CHECK(trace.slots[0].shared == std::vector<double>{100, 200, 0, 0, 0});
    CHECK(trace.slots[0].burdens == std::vector<double>{0, 0, 0, 0, 0});

    // Slot 2: RU3 alone offers 300 against 250, so it carries a burden of 50.
    CHECK(trace.slots[1].offered[2] == 300.0);
    CHECK(trace.slots[1].shared[2] == 250.0);
    CHECK(trace.slots[1].burdens[2] == 50.0);

    // Slot 3: exactly the burdened 50 is available again.
    CHECK(trace.slots[2].offered[2] == 50.0);
    CHECK(trace.slots[2].shared[2] == 50.0);

    // Slot 4: a single leftover seller cannot clear, the slot is skipped.
    CHECK(trace.slots[3].skipped);

    // Cumulative shared space never exceeds the initial capacity.
    for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
        double total = 0.0;
        for (const auto& slot : trace.slots) total += slot.shared[i];
        CHECK(total <= scenario.rus[i].b_max);
    }
}

TEST_CASE("per-slot offers stay within availability on random runs") {
    std::mt19937_64 gen(1234);
    for (int trial = 0; trial < 20; ++trial) {
        auto scenario = testutil::random_scenario(gen, 4, 3);
        for (auto& unit : scenario.rus) {
            unit.s_cap = unit.b_max = 400.0;
        }
        TemporalConfig tc;
        tc.horizon = 5;
        tc.demand.mode = DemandMode::Uniform;
        tc.demand.lo = 100.0;
        tc.demand.hi = 900.0;
        scenario.temporal = tc;
        scenario.config.seed = 100 + static_cast<std::uint64_t>(trial);

        const auto trace = simulate(scenario);
        REQUIRE(trace.slots.size() == 5);
        for (const auto& slot : trace.slots) {
            for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
                CHECK(slot.offered[i] <= slot.available[i] + 1e-12);
                CHECK(slot.offered[i] >= 0.0);
            }
        }
        for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
            double total = 0.0;
            for (const auto& slot : trace.slots) total += slot.shared[i];
            CHECK(total <= scenario.rus[i].b_max + 1e-9);
        }
    }
}

TEST_CASE("identical seeds reproduce the trace bit for bit") {
    std::mt19937_64 gen(555);
    auto scenario = testutil::random_scenario(gen, 5, 3);
    for (auto& unit : scenario.rus) {
        unit.s_cap = unit.b_max = 350.0;
    }
    TemporalConfig tc;
    tc.horizon = 6;
    tc.demand.mode = DemandMode::Uniform;
    tc.demand.lo = 200.0;
    tc.demand.hi = 1200.0;
    scenario.temporal = tc;
    scenario.config.seed = 99;

    const auto a = simulate(scenario);
    const auto b = simulate(scenario);
    REQUIRE(a.slots.size() == b.slots.size());
    for (std::size_t t = 0; t < a.slots.size(); ++t) {
        CHECK(a.slots[t].skipped == b.slots[t].skipped);
        CHECK(a.slots[t].p_star == b.slots[t].p_star);
        CHECK(a.slots[t].z_star == b.slots[t].z_star);
        CHECK(a.slots[t].demands == b.slots[t].demands);
        CHECK(a.slots[t].shared == b.slots[t].shared);
        CHECK(a.slots[t].utilities == b.slots[t].utilities);
    }
}

TEST_CASE("later price changes do not rewrite earlier slots") {
    auto scenario = depletion_scenario();
    const auto base = simulate(scenario);

    auto tweaked = scenario;
    tweaked.temporal->a_schedule[3] = {75.0, 65.0};
    tweaked.temporal->r_schedule[3] = {45.0, 46.0, 47.0, 48.0, 23.0};
    const auto changed = simulate(tweaked);

    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(base.slots[t].p_star == changed.slots[t].p_star);
        CHECK(base.slots[t].shared == changed.slots[t].shared);
        CHECK(base.slots[t].burdens == changed.slots[t].burdens);
    }
}
