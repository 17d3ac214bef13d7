#include "esshare/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace esshare {

namespace {

double sum_of(std::span<const double> v) {
    double total = 0.0;
    for (double x : v) total += x;
    return total;
}

// Nudges the last positive entry until the left-to-right sum of v equals
// target bitwise. Only the final add rounds, so iterative refinement on that
// entry converges; trailing zeros never perturb the sum. Deviations are a few
// ulps from the preceding arithmetic and entries never go negative.
void pin_sum(std::vector<double>& v, double target) {
    if (sum_of(v) == target) {
        return;
    }
    for (std::size_t spill = 0; spill <= v.size(); ++spill) {
        std::size_t idx = v.size();
        for (std::size_t i = v.size(); i-- > 0;) {
            if (v[i] > 0.0) {
                idx = i;
                break;
            }
        }
        if (idx == v.size()) {
            return;
        }
        double prefix = 0.0;
        for (std::size_t i = 0; i < idx; ++i) {
            prefix += v[i];
        }
        double entry = v[idx];
        for (int k = 0; k < 32 && entry >= 0.0; ++k) {
            const double achieved = prefix + entry;
            if (achieved == target) {
                v[idx] = entry;
                return;
            }
            entry += target - achieved;
        }
        v[idx] = 0.0;  // target sits below the prefix; spill into earlier entries
    }
}

}  // namespace

std::vector<double> equal_burden(std::size_t n, double oversupply) {
    if (n == 0) {
        throw Error("equal_burden: no participants");
    }
    if (oversupply < 0.0) {
        throw Error("equal_burden: negative oversupply");
    }
    std::vector<double> burdens(n, oversupply / static_cast<double>(n));
    pin_sum(burdens, oversupply);
    return burdens;
}

std::vector<double> proportional_burden(std::span<const double> weights, double oversupply) {
    if (weights.empty()) {
        throw Error("proportional_burden: no participants");
    }
    if (oversupply < 0.0) {
        throw Error("proportional_burden: negative oversupply");
    }
    double weight_sum = 0.0;
    bool uniform = true;
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw Error("proportional_burden: nonpositive weight");
        }
        weight_sum += w;
        uniform = uniform && w == weights[0];
    }
    if (uniform) {
        return equal_burden(weights.size(), oversupply);
    }
    std::vector<double> burdens(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        burdens[i] = oversupply * weights[i] / weight_sum;
    }
    pin_sum(burdens, oversupply);
    return burdens;
}

AllocationOutcome allocate(std::span<const double> x_star, std::span<const double> demands,
                           BurdenRule rule, std::span<const double> reserves) {
    if (x_star.empty()) {
        throw Error("allocate: empty offer vector");
    }
    AllocationOutcome out;
    out.rule = rule;

    const double offer_total = sum_of(x_star);
    const double demand_total = sum_of(demands);

    if (offer_total <= demand_total) {
        out.shared.assign(x_star.begin(), x_star.end());
        out.burdens.assign(x_star.size(), 0.0);
        out.oversupply = 0.0;
        return out;
    }

    out.oversupply = offer_total - demand_total;
    switch (rule) {
        case BurdenRule::Equal:
            out.burdens = equal_burden(x_star.size(), out.oversupply);
            break;
        case BurdenRule::ProportionalReserve:
            if (reserves.size() != x_star.size()) {
                throw Error("allocate: one reservation price per offer required");
            }
            out.burdens = proportional_burden(reserves, out.oversupply);
            break;
        case BurdenRule::ProportionalOffer: {
            // RUs with nothing on offer bear no burden.
            std::vector<double> positive;
            std::vector<std::size_t> where;
            for (std::size_t i = 0; i < x_star.size(); ++i) {
                if (x_star[i] > 0.0) {
                    positive.push_back(x_star[i]);
                    where.push_back(i);
                }
            }
            const auto sub = proportional_burden(positive, out.oversupply);
            out.burdens.assign(x_star.size(), 0.0);
            for (std::size_t i = 0; i < where.size(); ++i) {
                out.burdens[where[i]] = sub[i];
            }
            break;
        }
    }

    out.shared.resize(x_star.size());
    for (std::size_t i = 0; i < x_star.size(); ++i) {
        out.shared[i] = std::max(x_star[i] - out.burdens[i], 0.0);
    }

    // Clipping at zero can leave more allocated than demanded; re-spread the
    // excess over RUs that still hold a positive share until it is gone.
    for (std::size_t round = 0; round <= x_star.size(); ++round) {
        const double excess = sum_of(out.shared) - demand_total;
        if (excess <= 0.0) {
            break;
        }
        std::vector<std::size_t> open;
        double open_weight = 0.0;
        for (std::size_t i = 0; i < out.shared.size(); ++i) {
            if (out.shared[i] > 0.0) {
                open.push_back(i);
                if (rule == BurdenRule::ProportionalReserve) {
                    open_weight += reserves[i];
                } else if (rule == BurdenRule::ProportionalOffer) {
                    open_weight += x_star[i];
                }
            }
        }
        if (open.empty()) {
            break;
        }
        for (std::size_t i : open) {
            double cut = excess / static_cast<double>(open.size());
            if (rule == BurdenRule::ProportionalReserve) {
                cut = excess * reserves[i] / open_weight;
            } else if (rule == BurdenRule::ProportionalOffer) {
                cut = excess * x_star[i] / open_weight;
            }
            out.shared[i] = std::max(out.shared[i] - cut, 0.0);
        }
    }
    pin_sum(out.shared, demand_total);

    for (std::size_t i = 0; i < x_star.size(); ++i) {
        out.burdens[i] = std::max(x_star[i] - out.shared[i], 0.0);
    }
    pin_sum(out.burdens, out.oversupply);

    return out;
}

std::vector<SharePair> pair_allocations(std::span<const FacilityController> sfcs,
                                        std::span<const ResidentialUnit> rus,
                                        std::span<const double> shared) {
    if (rus.size() != shared.size()) {
        throw Error("pair_allocations: one shared quantity per RU required");
    }
    std::vector<SharePair> pairs;
    std::size_t ru = 0;
    double ru_left = rus.empty() ? 0.0 : shared[0];
    for (const auto& sfc : sfcs) {
        double need = sfc.q;
        while (need > 0.0 && ru < rus.size()) {
            if (ru_left <= 0.0) {
                ++ru;
                if (ru < rus.size()) {
                    ru_left = shared[ru];
                }
                continue;
            }
            const double moved = std::min(need, ru_left);
            pairs.push_back({sfc.id, rus[ru].id, moved});
            need -= moved;
            ru_left -= moved;
        }
    }
    return pairs;
}

}  // namespace esshare
