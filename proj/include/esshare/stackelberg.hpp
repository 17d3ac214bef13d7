#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "esshare/determination.hpp"
#include "esshare/scenario.hpp"

namespace esshare {

/// One grid evaluation of the leader's sweep.
struct TracePoint {
    std::size_t iteration = 0;  ///< 1-based
    double p = 0.0;
    double z = 0.0;
    std::vector<double> xs;
};

struct EquilibriumOutcome {
    double p_star = 0.0;
    double z_star = 0.0;
    std::vector<double> x_star;     ///< per participant, supply order
    std::vector<double> utilities;  ///< per participant at (p_star, x_star)
    std::vector<TracePoint> trace;
    double step = 0.0;  ///< grid step actually used
    /// Set when the closed-form price fell outside the interval or induced a
    /// clamped best response; the sweep result alone is authoritative then.
    bool boundary_regime = true;
    std::optional<double> closed_form;  ///< recorded when the interior cross-check ran
};

/// Unique maximizer of the RU's net benefit on [0, b_max]: clamp((p - r)/(2 alpha), 0, b_max).
double best_response(double p, const ResidentialUnit& ru);

/// Net benefit (p - r) x - alpha x^2. Throws when x is outside [0, b_max].
double utility(const ResidentialUnit& ru, double x, double p);

/// Average per-SFC saving times total shared quantity:
/// (sum_m (a_m - p) / |sfcs|) * sum_i x_i, over the participating SFCs.
double average_savings(std::span<const FacilityController> sfcs, double p,
                       std::span<const double> xs);

/// Interior-regime equilibrium price, valid only when every participant's best
/// response at the result is unclamped (caller verifies).
double closed_form_price(std::span<const ResidentialUnit> rus,
                         std::span<const FacilityController> sfcs);

/// Leader sweep: evaluates the followers' best responses on the price grid
/// {p_min, p_min + step, ..., p_max} (p_max always included) and keeps the
/// latest price whose savings are >= the incumbent. `rus` and `sfcs` are the
/// participating subsets; the interval comes from the determination outcome.
EquilibriumOutcome sweep_equilibrium(const DeterminationOutcome& det,
                                     std::span<const ResidentialUnit> rus,
                                     std::span<const FacilityController> sfcs, double step);

/// Sweep plus the closed-form cross-check. In the interior regime the two
/// routes must agree within one grid step or CrossCheckError is thrown.
/// `step` empty selects the default (p_max - p_min) / 1000.
EquilibriumOutcome equilibrium(const DeterminationOutcome& det,
                               std::span<const ResidentialUnit> rus,
                               std::span<const FacilityController> sfcs,
                               std::optional<double> step = std::nullopt);

/// Grid step for an interval when the scenario does not pin one.
double default_sweep_step(double p_min, double p_max);

}  // namespace esshare
