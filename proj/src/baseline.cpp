#include "evcharge/baseline.hpp"

#include <algorithm>
#include <numeric>

namespace evcharge {

double FcfsResult::total_shortfall() const {
    return std::accumulate(shortfall.begin(), shortfall.end(), 0.0);
}

FcfsResult fcfs_with_report(const Scenario& sc) {
    check_scenario(sc);
    const auto T = sc.horizon_steps;
    const auto N = sc.num_vehicles();

    std::vector<std::size_t> arrival(N, T);
    for (std::size_t i = 0; i < N; ++i)
        if (const auto w = sc.window(i)) arrival[i] = w->first;
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return arrival[a] < arrival[b]; });

    FcfsResult out;
    out.schedule = {Allocation(T, N, 0.0), Method::Fcfs, sc.scenario_id};
    std::vector<double> residual = sc.load;
    for (std::size_t t = 0; t < T; ++t) {
        double capacity_left = sc.capacity[t];
        for (const auto i : order) {
            if (!sc.occupancy(t, i)) continue;
            const double x = std::max(0.0, std::min({sc.socket_limit[t], residual[i], capacity_left}));
            out.schedule.allocation(t, i) = x;
            residual[i] -= x;
            capacity_left -= x;
        }
    }
    out.shortfall.resize(N);
    for (std::size_t i = 0; i < N; ++i) out.shortfall[i] = residual[i] > kFeasibilityTol ? residual[i] : 0.0;
    return out;
}

Schedule fcfs_schedule(const Scenario& sc) { return fcfs_with_report(sc).schedule; }

}  // namespace evcharge
