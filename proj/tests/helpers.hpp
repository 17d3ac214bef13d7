#pragma once

// Test-only scenario builders and generators.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "esshare/scenario.hpp"

namespace testutil {

inline esshare::ResidentialUnit ru(std::string id, double r, double alpha, double b,
                                   double d_reserved = 0.0) {
    esshare::ResidentialUnit unit;
    unit.id = std::move(id);
    unit.d_reserved = d_reserved;
    unit.s_cap = b + d_reserved;
    unit.b_max = b;
    unit.r = r;
    unit.alpha = alpha;
    return unit;
}

inline esshare::FacilityController sfc(std::string id, double a, double q) {
    esshare::FacilityController controller;
    controller.id = std::move(id);
    controller.a = a;
    controller.q = q;
    return controller;
}

inline esshare::MarketScenario make_scenario(std::vector<esshare::ResidentialUnit> rus,
                                             std::vector<esshare::FacilityController> sfcs) {
    esshare::MarketScenario scenario;
    scenario.rus = std::move(rus);
    scenario.sfcs = std::move(sfcs);
    return scenario;
}

inline double pick(std::mt19937_64& gen, double lo, double hi) {
    return lo + (static_cast<double>(gen() >> 11) * 0x1.0p-53) * (hi - lo);
}

/// Distinct random prices, ascending.
inline std::vector<double> distinct_prices(std::mt19937_64& gen, std::size_t n, double lo,
                                           double hi) {
    std::vector<double> prices;
    while (prices.size() < n) {
        const double candidate = pick(gen, lo, hi);
        bool fresh = true;
        for (double p : prices) {
            if (p == candidate) fresh = false;
        }
        if (fresh) prices.push_back(candidate);
    }
    std::sort(prices.begin(), prices.end());
    return prices;
}

/// Random market with distinct prices, reluctances in [0.01, 0.2] and offer
/// space large enough that best responses never clamp at b.
inline esshare::MarketScenario random_scenario(std::mt19937_64& gen, std::size_t n_ru,
                                               std::size_t n_sfc) {
    std::vector<esshare::ResidentialUnit> rus;
    const auto reserves = distinct_prices(gen, n_ru, 20.0, 60.0);
    for (std::size_t i = 0; i < n_ru; ++i) {
        rus.push_back(ru("ru" + std::to_string(i + 1), reserves[i], pick(gen, 0.01, 0.2), 2500.0));
    }
    std::vector<esshare::FacilityController> sfcs;
    auto bids = distinct_prices(gen, n_sfc, 25.0, 75.0);
    std::sort(bids.rbegin(), bids.rend());
    for (std::size_t m = 0; m < n_sfc; ++m) {
        sfcs.push_back(sfc("sfc" + std::to_string(m + 1), bids[m], pick(gen, 800.0, 3000.0)));
    }
    return make_scenario(std::move(rus), std::move(sfcs));
}

}  // namespace testutil
