#pragma once

#include <vector>

#include "evcharge/cutting_plane.hpp"
#include "evcharge/model.hpp"

namespace evcharge {

/// Prices known only up to ||pi - center||_2 <= radius.
struct PriceBall {
    std::vector<double> center;  // currency per kWh, length T
    double radius = 0.0;
};

/// Loads known only up to lower <= L <= upper (elementwise).
struct LoadInterval {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct RobustResult {
    Schedule schedule;
    /// Per-step energy bought, (1 + waste_t) * total power_t * step length.
    std::vector<double> step_energy;
    /// center.step_energy + radius * ||step_energy||_2 at the returned schedule.
    double objective = 0.0;
    double lower_bound = 0.0;
    double relative_gap = 0.0;
    CutStatus cut_status = CutStatus::Converged;
    std::size_t cuts = 0;
};

/// Worst-case cost over the price ball, minimized over the nominal constraint set.
/// Throws InfeasibleScenario when the scenario cannot be served.
RobustResult optimize_robust_price(const Scenario& scenario, const PriceBall& ball,
                                   const CutOptions& opts = {});

/// Copy of the scenario with the load replaced by the interval's upper end.
Scenario robustify_load(const Scenario& scenario, const LoadInterval& interval);

/// robustify_load followed by optimize_robust_price.
RobustResult optimize_robust_both(const Scenario& scenario, const PriceBall& ball,
                                  const LoadInterval& interval, const CutOptions& opts = {});

}  // namespace evcharge
