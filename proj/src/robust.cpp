#include "evcharge/robust.hpp"

#include <cmath>

#include "evcharge/nominal.hpp"

namespace evcharge {

namespace {

void check_ball(const PriceBall& ball, const Scenario& sc) {
    if (ball.center.size() != sc.horizon_steps)
        throw ShapeMismatch("price ball center must have length " + std::to_string(sc.horizon_steps));
    if (!(ball.radius >= 0.0) || !std::isfinite(ball.radius))
        throw InvalidArgument("price ball radius must be a nonnegative number");
    for (double p : ball.center)
        if (!std::isfinite(p)) throw InvalidArgument("price ball center must be finite");
}

RobustResult solve_robust(const Scenario& sc, const PriceBall& ball, Method method, const CutOptions& opts) {
    check_ball(ball, sc);
    auto report = check_feasibility(sc);
    if (!report.feasible) throw InfeasibleScenario(sc.scenario_id, std::move(report));

    Scenario centered = sc;
    centered.prices = ball.center;
    const auto model = build_scheduling_lp(centered);

    NormMap map(sc.horizon_steps);
    for (std::size_t k = 0; k < model.cells.size(); ++k) {
        const auto t = model.cells[k].first;
        map[t].push_back({k, (1.0 + sc.waste[t]) * sc.step_hours});
    }

    const auto sol = solve_norm_augmented(model.lp, ball.radius, map, opts);
    if (sol.status != LpStatus::Optimal)
        throw NumericalFailure("robust LP for " + sc.scenario_id + " reported " +
                               std::string(to_string(sol.status)) + " after a feasible check");

    RobustResult out;
    out.schedule = {allocation_from(model, sol.x, sc), method, sc.scenario_id};
    out.step_energy = sol.mapped;
    out.objective = sol.objective;
    out.lower_bound = sol.lower_bound;
    out.relative_gap = sol.relative_gap;
    out.cut_status = sol.cut_status;
    out.cuts = sol.cuts;
    return out;
}

}  // namespace

RobustResult optimize_robust_price(const Scenario& sc, const PriceBall& ball, const CutOptions& opts) {
    return solve_robust(sc, ball, Method::RobustPrice, opts);
}

Scenario robustify_load(const Scenario& sc, const LoadInterval& interval) {
    const auto N = sc.num_vehicles();
    if (interval.lower.size() != N || interval.upper.size() != N)
        throw ShapeMismatch("load interval must have length " + std::to_string(N));
    for (std::size_t i = 0; i < N; ++i)
        if (!(interval.lower[i] >= 0.0) || !(interval.lower[i] <= interval.upper[i]) ||
            !std::isfinite(interval.upper[i]))
            throw InvalidArgument("load interval needs 0 <= lower <= upper");
    Scenario out = sc;
    out.load = interval.upper;
    return out;
}

RobustResult optimize_robust_both(const Scenario& sc, const PriceBall& ball, const LoadInterval& interval,
                                  const CutOptions& opts) {
    return solve_robust(robustify_load(sc, interval), ball, Method::RobustLoad, opts);
}

}  // namespace evcharge
