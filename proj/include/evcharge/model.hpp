#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evcharge/errors.hpp"

namespace evcharge {

/// Absolute feasibility tolerance on power values (kW).
inline constexpr double kFeasibilityTol = 1e-8;
/// Relative tolerance used when comparing costs.
inline constexpr double kCostRelTol = 1e-6;

/// Dense row-major matrix indexed (time step, vehicle).
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<T>& values() const noexcept { return data_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Occupancy = Grid<std::uint8_t>;
using Allocation = Grid<double>;

/// Inclusive 0-based step range [first, last] during which a vehicle is parked.
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t length() const noexcept { return last - first + 1; }
    bool contains(std::size_t t) const noexcept { return t >= first && t <= last; }
    bool operator==(const Window&) const = default;
};

/// One day's charging problem.
///
/// `occupancy(t, i)` is 1 iff vehicle i is parked during step t. Loads are
/// kW-equivalent (energy divided by the step length) so that the per-step
/// powers of a vehicle must sum to at least its load.
struct Scenario {
    std::string scenario_id;
    std::size_t horizon_steps = 0;
    double step_hours = 1.0;
    Occupancy occupancy;          // T x N
    std::vector<double> load;     // N
    std::vector<double> capacity; // T
    std::vector<double> socket_limit;  // T
    std::vector<double> waste;    // T
    std::vector<double> prices;   // T, currency per kWh
    std::vector<std::string> vehicle_ids;  // empty or N

    std::size_t num_vehicles() const noexcept { return load.size(); }

    /// Parking window of vehicle i, or nullopt when its column is empty.
    std::optional<Window> window(std::size_t vehicle) const;
};

/// Throws InvalidArgument / ShapeMismatch when a scenario breaks its invariants.
void check_scenario(const Scenario& scenario);

/// Builds a scenario with uniform capacity, socket limit and waste factor.
Scenario make_scenario(std::string id, std::vector<double> prices,
                       std::vector<std::optional<Window>> windows, std::vector<double> load,
                       double capacity, double socket_limit, double waste,
                       double step_hours = 1.0);

enum class Method { Nominal, RobustPrice, RobustLoad, Fcfs };

std::string_view to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

struct Schedule {
    Allocation allocation;  // T x N, kW
    Method method = Method::Nominal;
    std::string scenario_id;
};

struct CostBreakdown {
    std::vector<double> per_step_cost;
    double total_cost = 0.0;
    double total_energy_delivered = 0.0;  // kWh
    double total_energy_wasted = 0.0;     // kWh
};

enum class ViolationKind { NegativePower, SocketExceeded, CapacityExceeded, DemandShortfall, OutsideWindow };

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::optional<std::size_t> step;
    std::optional<std::size_t> vehicle;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool feasible() const noexcept { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
};

/// Per-step total power sum_i A(t,i) * Y(t,i).
std::vector<double> step_totals(const Allocation& allocation, const Scenario& scenario);

/// Linear-price cost of a schedule, charging (1 + waste_t) on every delivered kWh.
CostBreakdown evaluate_cost(const Schedule& schedule, const Scenario& scenario);

/// Lists every violated constraint with its magnitude, at tolerance `tol` kW.
ValidationReport validate_schedule(const Schedule& schedule, const Scenario& scenario,
                                   double tol = kFeasibilityTol);

}  // namespace evcharge
