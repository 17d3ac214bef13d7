#include "esshare/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace esshare {

double best_response(double p, const ResidentialUnit& ru) {
    const double interior = (p - ru.r) / (2.0 * ru.alpha);
    return std::clamp(interior, 0.0, ru.b_max);
}

double utility(const ResidentialUnit& ru, double x, double p) {
    if (x < 0.0 || x > ru.b_max) {
        throw Error("utility: shared quantity " + std::to_string(x) + " outside [0, " +
                    std::to_string(ru.b_max) + "] for RU " + ru.id);
    }
    return (p - ru.r) * x - ru.alpha * x * x;
}

double average_savings(std::span<const FacilityController> sfcs, double p,
                       std::span<const double> xs) {
    if (sfcs.empty()) {
        throw Error("average_savings: no participating SFCs");
    }
    double margin_sum = 0.0;
    for (const auto& sfc : sfcs) {
        margin_sum += sfc.a - p;
    }
    double total_shared = 0.0;
    for (double x : xs) {
        total_shared += x;
    }
    return margin_sum / static_cast<double>(sfcs.size()) * total_shared;
}

double closed_form_price(std::span<const ResidentialUnit> rus,
                         std::span<const FacilityController> sfcs) {
    if (rus.empty() || sfcs.empty()) {
        throw Error("closed_form_price: empty participant set");
    }
    const double n_sfc = static_cast<double>(sfcs.size());
    double bid_sum = 0.0;
    for (const auto& sfc : sfcs) {
        bid_sum += sfc.a;
    }
    double inv_alpha_half = 0.0;   // sum_i 1 / (2 alpha_i)
    double reserve_term = 0.0;     // sum_i r_i (K-1) / (2 alpha_i)
    double denominator = 0.0;      // sum_i (K-1) / alpha_i
    for (const auto& ru : rus) {
        inv_alpha_half += 1.0 / (2.0 * ru.alpha);
        reserve_term += ru.r * n_sfc / (2.0 * ru.alpha);
        denominator += n_sfc / ru.alpha;
    }
    return (inv_alpha_half * bid_sum + reserve_term) / denominator;
}

double default_sweep_step(double p_min, double p_max) {
    const double span = p_max - p_min;
    return span > 0.0 ? span / 1000.0 : 1.0;
}

EquilibriumOutcome sweep_equilibrium(const DeterminationOutcome& det,
                                     std::span<const ResidentialUnit> rus,
                                     std::span<const FacilityController> sfcs, double step) {
    if (!(step > 0.0)) {
        throw Error("sweep_equilibrium: step must be positive");
    }
    if (rus.empty()) {
        throw Error("sweep_equilibrium: no participating RUs");
    }
    const double p_min = det.p_min;
    const double p_max = det.p_max;
    if (p_max < p_min) {
        throw Error("sweep_equilibrium: inverted price interval");
    }

    std::vector<double> grid;
    if (p_max == p_min) {
        grid.push_back(p_min);
    } else {
        const auto whole_steps = static_cast<std::size_t>(std::floor((p_max - p_min) / step));
        grid.reserve(whole_steps + 2);
        for (std::size_t i = 0; i <= whole_steps; ++i) {
            const double p = p_min + static_cast<double>(i) * step;
            grid.push_back(std::min(p, p_max));
        }
        if (grid.back() < p_max) {
            grid.push_back(p_max);
        }
    }

    EquilibriumOutcome out;
    out.step = step;
    out.p_star = p_min;
    out.z_star = 0.0;
    out.x_star.assign(rus.size(), 0.0);
    out.trace.reserve(grid.size());

    std::vector<double> xs(rus.size());
    for (std::size_t it = 0; it < grid.size(); ++it) {
        const double p = grid[it];
        for (std::size_t i = 0; i < rus.size(); ++i) {
            xs[i] = best_response(p, rus[i]);
        }
        const double z = average_savings(sfcs, p, xs);
        out.trace.push_back({it + 1, p, z, xs});
        if (z >= out.z_star) {  // latest maximizer wins ties
            out.z_star = z;
            out.p_star = p;
            out.x_star = xs;
        }
    }

    out.utilities.resize(rus.size());
    for (std::size_t i = 0; i < rus.size(); ++i) {
        out.utilities[i] = utility(rus[i], out.x_star[i], out.p_star);
    }
    return out;
}

EquilibriumOutcome equilibrium(const DeterminationOutcome& det,
                               std::span<const ResidentialUnit> rus,
                               std::span<const FacilityController> sfcs,
                               std::optional<double> step) {
    const double grid_step = step.value_or(default_sweep_step(det.p_min, det.p_max));
    EquilibriumOutcome out = sweep_equilibrium(det, rus, sfcs, grid_step);

    const double p_closed = closed_form_price(rus, sfcs);
    bool interior = p_closed >= det.p_min && p_closed <= det.p_max;
    for (const auto& ru : rus) {
        const double response = (p_closed - ru.r) / (2.0 * ru.alpha);
        if (response < 0.0 || response > ru.b_max) {
            interior = false;
            break;
        }
    }
    if (interior) {
        out.boundary_regime = false;
        out.closed_form = p_closed;
        const double slack = grid_step + 1e-9 * (std::abs(p_closed) + 1.0);
        if (std::abs(out.p_star - p_closed) > slack) {
            throw CrossCheckError("interior-regime disagreement: sweep " +
                                  std::to_string(out.p_star) + " vs closed form " +
                                  std::to_string(p_closed) + " exceeds one grid step " +
                                  std::to_string(grid_step));
        }
    } else {
        out.boundary_regime = true;
    }
    return out;
}

}  // namespace esshare
