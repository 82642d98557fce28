#include "evcharge/model.hpp"

#include <algorithm>
#include <cmath>

namespace evcharge {

namespace {

void require_shapes(const Schedule& schedule, const Scenario& scenario) {
    const auto& y = schedule.allocation;
    if (y.rows() != scenario.horizon_steps || y.cols() != scenario.num_vehicles())
        throw ShapeMismatch("schedule is " + std::to_string(y.rows()) + "x" +
                            std::to_string(y.cols()) + ", scenario is " +
                            std::to_string(scenario.horizon_steps) + "x" +
                            std::to_string(scenario.num_vehicles()));
}

}  // namespace

std::optional<Window> Scenario::window(std::size_t vehicle) const {
    std::optional<Window> w;
    for (std::size_t t = 0; t < horizon_steps; ++t) {
        if (!occupancy(t, vehicle)) continue;
        if (!w) w = Window{t, t};
        else w->last = t;
    }
    return w;
}

void check_scenario(const Scenario& sc) {
    const auto T = sc.horizon_steps;
    const auto N = sc.num_vehicles();
    if (T == 0) throw InvalidArgument("horizon_steps must be positive");
    if (!(sc.step_hours > 0.0) || !std::isfinite(sc.step_hours))
        throw InvalidArgument("step_hours must be positive");
    if (sc.occupancy.rows() != T || sc.occupancy.cols() != N)
        throw ShapeMismatch("occupancy must be " + std::to_string(T) + "x" + std::to_string(N));
    for (const auto* v : {&sc.capacity, &sc.socket_limit, &sc.waste, &sc.prices})
        if (v->size() != T) throw ShapeMismatch("per-step vectors must have length " + std::to_string(T));
    if (!sc.vehicle_ids.empty() && sc.vehicle_ids.size() != N)
        throw ShapeMismatch("vehicle_ids must be empty or have length " + std::to_string(N));

    for (std::size_t t = 0; t < T; ++t) {
        if (!(sc.capacity[t] >= 0.0)) throw InvalidArgument("capacity must be nonnegative");
        if (!(sc.socket_limit[t] >= 0.0)) throw InvalidArgument("socket_limit must be nonnegative");
        if (!(sc.waste[t] >= 0.0)) throw InvalidArgument("waste must be nonnegative");
        if (!std::isfinite(sc.prices[t])) throw InvalidArgument("prices must be finite");
    }
    for (std::size_t i = 0; i < N; ++i) {
        if (!(sc.load[i] >= 0.0) || !std::isfinite(sc.load[i]))
            throw InvalidArgument("load must be nonnegative");
        // Column must be a single contiguous run of ones.
        std::size_t runs = 0;
        bool prev = false;
        for (std::size_t t = 0; t < T; ++t) {
            const std::uint8_t a = sc.occupancy(t, i);
            if (a > 1) throw InvalidArgument("occupancy must be binary");
            if (a && !prev) ++runs;
            prev = a;
        }
        if (runs > 1)
            throw InvalidArgument("vehicle " + std::to_string(i) + " has a non-contiguous window");
        if (runs == 0 && sc.load[i] > 0.0)
            throw InvalidArgument("vehicle " + std::to_string(i) + " has load but no window");
    }
}

Scenario make_scenario(std::string id, std::vector<double> prices,
                       std::vector<std::optional<Window>> windows, std::vector<double> load,
                       double capacity, double socket_limit, double waste, double step_hours) {
    if (windows.size() != load.size()) throw ShapeMismatch("windows and load differ in length");
    Scenario sc;
    sc.scenario_id = std::move(id);
    sc.horizon_steps = prices.size();
    sc.step_hours = step_hours;
    sc.occupancy = Occupancy(prices.size(), load.size(), 0);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (!windows[i]) continue;
        const auto w = *windows[i];
        if (w.first > w.last || w.last >= prices.size())
            throw InvalidArgument("window out of range for vehicle " + std::to_string(i));
        for (std::size_t t = w.first; t <= w.last; ++t) sc.occupancy(t, i) = 1;
    }
    sc.load = std::move(load);
    sc.capacity.assign(sc.horizon_steps, capacity);
    sc.socket_limit.assign(sc.horizon_steps, socket_limit);
    sc.waste.assign(sc.horizon_steps, waste);
    sc.prices = std::move(prices);
    check_scenario(sc);
    return sc;
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Nominal: return "nominal";
        case Method::RobustPrice: return "robust-price";
        case Method::RobustLoad: return "robust-load";
        case Method::Fcfs: return "fcfs";
    }
    return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
    for (auto m : {Method::Nominal, Method::RobustPrice, Method::RobustLoad, Method::Fcfs})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::NegativePower: return "NegativePower";
        case ViolationKind::SocketExceeded: return "SocketExceeded";
        case ViolationKind::CapacityExceeded: return "CapacityExceeded";
        case ViolationKind::DemandShortfall: return "DemandShortfall";
        case ViolationKind::OutsideWindow: return "OutsideWindow";
    }
    return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [&](const Violation& v) { return v.kind == kind; }));
}

std::vector<double> step_totals(const Allocation& y, const Scenario& sc) {
    std::vector<double> totals(y.rows(), 0.0);
    for (std::size_t t = 0; t < y.rows(); ++t)
        for (std::size_t i = 0; i < y.cols(); ++i)
            if (sc.occupancy(t, i)) totals[t] += y(t, i);
    return totals;
}

CostBreakdown evaluate_cost(const Schedule& schedule, const Scenario& sc) {
    require_shapes(schedule, sc);
    const auto& y = schedule.allocation;
    CostBreakdown out;
    out.per_step_cost.assign(sc.horizon_steps, 0.0);
    const auto totals = step_totals(y, sc);
    for (std::size_t t = 0; t < sc.horizon_steps; ++t) {
        const double energy = totals[t] * sc.step_hours;
        out.per_step_cost[t] = sc.prices[t] * (1.0 + sc.waste[t]) * energy;
        out.total_cost += out.per_step_cost[t];
        out.total_energy_wasted += sc.waste[t] * energy;
    }
    for (double v : y.values()) out.total_energy_delivered += v * sc.step_hours;
    return out;
}

ValidationReport validate_schedule(const Schedule& schedule, const Scenario& sc, double tol) {
    require_shapes(schedule, sc);
    const auto& y = schedule.allocation;
    const auto T = sc.horizon_steps;
    const auto N = sc.num_vehicles();
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::optional<std::size_t> t,
                   std::optional<std::size_t> i, double magnitude) {
        report.violations.push_back({kind, t, i, magnitude});
    };

    for (std::size_t t = 0; t < T; ++t) {
        double total = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double v = y(t, i);
            if (v < -tol) add(ViolationKind::NegativePower, t, i, -v);
            if (v > sc.socket_limit[t] + tol)
                add(ViolationKind::SocketExceeded, t, i, v - sc.socket_limit[t]);
            if (!sc.occupancy(t, i) && std::abs(v) > tol)
                add(ViolationKind::OutsideWindow, t, i, std::abs(v));
            total += v;
        }
        if (total > sc.capacity[t] + tol)
            add(ViolationKind::CapacityExceeded, t, std::nullopt, total - sc.capacity[t]);
    }
    for (std::size_t i = 0; i < N; ++i) {
        double delivered = 0.0;
        for (std::size_t t = 0; t < T; ++t) delivered += y(t, i);
        if (delivered < sc.load[i] - tol)
            add(ViolationKind::DemandShortfall, std::nullopt, i, sc.load[i] - delivered);
    }
    return report;
}

}  // namespace evcharge
