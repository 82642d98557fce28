#include "evcharge/nominal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace evcharge {

namespace {

std::string describe(const std::string& id, const FeasibilityReport& report) {
    std::ostringstream msg;
    msg << "scenario " << id << " is infeasible: deliverable " << report.max_flow << " of "
        << report.total_load;
    std::size_t short_windows = 0;
    for (double s : report.per_vehicle_slack)
        if (s < -kFeasibilityTol) ++short_windows;
    if (short_windows) msg << ", " << short_windows << " vehicle(s) exceed their window capacity";
    return msg.str();
}

}  // namespace

InfeasibleScenario::InfeasibleScenario(std::string scenario_id, FeasibilityReport report)
    : Error(describe(scenario_id, report)), report_(std::move(report)) {}

double unit_cost(const Scenario& sc, std::size_t t) {
    return sc.prices[t] * (1.0 + sc.waste[t]) * sc.step_hours;
}

FlowNetwork transportation_network(const Scenario& sc) {
    const auto T = sc.horizon_steps;
    const auto N = sc.num_vehicles();
    FlowNetwork net;
    net.source = net.add_node();
    net.sink = net.add_node();
    const std::size_t first_vehicle = net.num_nodes;
    for (std::size_t i = 0; i < N; ++i) net.add_node();
    const std::size_t first_step = net.num_nodes;
    for (std::size_t t = 0; t < T; ++t) net.add_node();

    for (std::size_t i = 0; i < N; ++i) net.add_arc(net.source, first_vehicle + i, sc.load[i]);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t t = 0; t < T; ++t)
            if (sc.occupancy(t, i))
                net.add_arc(first_vehicle + i, first_step + t, sc.socket_limit[t], unit_cost(sc, t));
    for (std::size_t t = 0; t < T; ++t) net.add_arc(first_step + t, net.sink, sc.capacity[t]);
    return net;
}

FeasibilityReport check_feasibility(const Scenario& sc) {
    check_scenario(sc);
    FeasibilityReport report;
    const auto N = sc.num_vehicles();
    report.per_vehicle_slack.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        double window_capacity = 0.0;
        for (std::size_t t = 0; t < sc.horizon_steps; ++t)
            if (sc.occupancy(t, i)) window_capacity += sc.socket_limit[t];
        report.per_vehicle_slack[i] = window_capacity - sc.load[i];
    }
    report.total_load = std::accumulate(sc.load.begin(), sc.load.end(), 0.0);
    report.max_flow = max_flow_value(transportation_network(sc));
    report.feasible =
        report.max_flow >= report.total_load - kFeasibilityTol &&
        std::all_of(report.per_vehicle_slack.begin(), report.per_vehicle_slack.end(),
                    [](double s) { return s >= -kFeasibilityTol; });
    return report;
}

SchedulingLp build_scheduling_lp(const Scenario& sc) {
    const auto T = sc.horizon_steps;
    const auto N = sc.num_vehicles();
    SchedulingLp model;
    auto& lp = model.lp;

    std::vector<std::vector<Term>> demand(N), budget(T);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t t = 0; t < T; ++t) {
            if (!sc.occupancy(t, i)) continue;
            const auto var = lp.add_variable(unit_cost(sc, t), 0.0, sc.socket_limit[t]);
            model.cells.emplace_back(t, i);
            demand[i].push_back({var, 1.0});
            budget[t].push_back({var, 1.0});
        }
    }
    for (std::size_t i = 0; i < N; ++i)
        if (!demand[i].empty()) lp.add_ge(std::move(demand[i]), sc.load[i]);
    for (std::size_t t = 0; t < T; ++t)
        if (!budget[t].empty()) lp.add_le(std::move(budget[t]), sc.capacity[t]);
    return model;
}

Allocation allocation_from(const SchedulingLp& model, const std::vector<double>& x, const Scenario& sc) {
    Allocation y(sc.horizon_steps, sc.num_vehicles(), 0.0);
    for (std::size_t k = 0; k < model.cells.size(); ++k) {
        const auto [t, i] = model.cells[k];
        y(t, i) = std::clamp(x[k], 0.0, sc.socket_limit[t]);
    }
    return y;
}

OptimizationResult optimize_nominal(const Scenario& sc, const LpOptions& opts) {
    auto report = check_feasibility(sc);
    if (!report.feasible) throw InfeasibleScenario(sc.scenario_id, std::move(report));

    const auto model = build_scheduling_lp(sc);
    const auto sol = solve_lp(model.lp, opts);
    if (sol.status != LpStatus::Optimal)
        throw NumericalFailure("scheduling LP for " + sc.scenario_id + " reported " +
                               std::string(to_string(sol.status)) + " after a feasible check");

    OptimizationResult out;
    out.schedule = {allocation_from(model, sol.x, sc), Method::Nominal, sc.scenario_id};
    out.cost = evaluate_cost(out.schedule, sc);
    out.objective = sol.objective;
    out.relative_gap = sol.relative_gap;
    return out;
}

}  // namespace evcharge
