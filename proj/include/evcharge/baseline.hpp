#pragma once

#include <vector>

#include "evcharge/model.hpp"

namespace evcharge {

struct FcfsResult {
    Schedule schedule;
    std::vector<double> shortfall;  // unmet load per vehicle at the end of the horizon

    double total_shortfall() const;
};

/// First-come-first-served allocation.
///
/// Steps are visited in order; within a step the parked vehicles are served
/// by arrival step, then by index, each receiving
/// min(socket limit, remaining load, remaining station capacity).
FcfsResult fcfs_with_report(const Scenario& scenario);

Schedule fcfs_schedule(const Scenario& scenario);

}  // namespace evcharge
