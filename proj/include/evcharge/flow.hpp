#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace evcharge {

struct FlowArc {
    std::size_t from;
    std::size_t to;
    double capacity;
    double cost;  // per unit of flow
};

/// Directed network with a single source and sink.
struct FlowNetwork {
    std::size_t num_nodes = 0;
    std::size_t source = 0;
    std::size_t sink = 0;
    std::vector<FlowArc> arcs;

    std::size_t add_node() { return num_nodes++; }
    std::size_t add_arc(std::size_t from, std::size_t to, double capacity, double cost = 0.0);

    /// Throws InvalidArgument for out-of-range endpoints or negative capacities.
    void validate() const;
};

enum class FlowStatus { Optimal, Infeasible };

std::string_view to_string(FlowStatus status);

struct FlowResult {
    FlowStatus status = FlowStatus::Infeasible;
    std::vector<double> arc_flow;  // parallel to FlowNetwork::arcs
    double value = 0.0;            // flow shipped from source to sink
    double cost = 0.0;
};

/// Successive shortest paths with Johnson potentials. Ships exactly
/// `required_flow` at minimum cost, or reports Infeasible (with the maximum
/// flow it managed) when the network cannot carry that much.
///
/// Arc costs may be negative as long as no cycle of positive-capacity arcs
/// has negative total cost.
FlowResult solve_min_cost_flow(const FlowNetwork& net, double required_flow);

/// Maximum source-to-sink flow value (Dinic).
double max_flow_value(const FlowNetwork& net);

}  // namespace evcharge
