#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "evcharge/flow.hpp"
#include "evcharge/lp.hpp"
#include "evcharge/model.hpp"

namespace evcharge {

struct FeasibilityReport {
    bool feasible = true;
    /// Window capacity (sum of socket limits over the window) minus load.
    std::vector<double> per_vehicle_slack;
    double max_flow = 0.0;
    double total_load = 0.0;
};

FeasibilityReport check_feasibility(const Scenario& scenario);

/// The scenario's demands cannot all be met within its socket and station limits.
class InfeasibleScenario : public Error {
public:
    InfeasibleScenario(std::string scenario_id, FeasibilityReport report);

    const FeasibilityReport& report() const noexcept { return report_; }

private:
    FeasibilityReport report_;
};

/// Scheduling LP with one variable per occupied (step, vehicle) cell.
struct SchedulingLp {
    LinearProgram lp;
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // variable -> (t, i)
};

/// Cost per kW allocated during step t: price * (1 + waste) * step length.
double unit_cost(const Scenario& scenario, std::size_t t);

SchedulingLp build_scheduling_lp(const Scenario& scenario);

Allocation allocation_from(const SchedulingLp& model, const std::vector<double>& x,
                           const Scenario& scenario);

/// source -> vehicle (cap L_i) -> step (cap s_t, unit cost) -> sink (cap C_t).
/// With nonnegative prices its min-cost flow of value sum(L) equals the
/// scheduling LP optimum.
FlowNetwork transportation_network(const Scenario& scenario);

struct OptimizationResult {
    Schedule schedule;
    CostBreakdown cost;
    double objective = 0.0;      // solver objective
    double relative_gap = 0.0;   // certified optimality gap
};

/// Minimum-cost schedule. Throws InfeasibleScenario when check_feasibility fails.
OptimizationResult optimize_nominal(const Scenario& scenario, const LpOptions& opts = {});

}  // namespace evcharge
