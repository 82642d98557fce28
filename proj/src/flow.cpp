#include "evcharge/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "evcharge/errors.hpp"

namespace evcharge {

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, double capacity, double cost) {
    arcs.push_back({from, to, capacity, cost});
    return arcs.size() - 1;
}

void FlowNetwork::validate() const {
    if (source >= num_nodes || sink >= num_nodes) throw InvalidArgument("source/sink out of range");
    if (source == sink) throw InvalidArgument("source and sink must differ");
    for (const auto& a : arcs) {
        if (a.from >= num_nodes || a.to >= num_nodes) throw InvalidArgument("arc endpoint out of range");
        if (!(a.capacity >= 0.0)) throw InvalidArgument("arc capacities must be nonnegative");
        if (!std::isfinite(a.cost)) throw InvalidArgument("arc costs must be finite");
    }
}

std::string_view to_string(FlowStatus status) {
    return status == FlowStatus::Optimal ? "optimal" : "infeasible";
}

namespace {

constexpr double kDistInf = std::numeric_limits<double>::infinity();

// Residual graph: arc 2k is the forward copy of input arc k, 2k+1 its reverse.
struct Residual {
    struct Edge {
        std::size_t to;
        double cap;
        double cost;
    };

    explicit Residual(const FlowNetwork& net) : adj(net.num_nodes) {
        edges.reserve(2 * net.arcs.size());
        for (const auto& a : net.arcs) {
            adj[a.from].push_back(edges.size());
            edges.push_back({a.to, a.capacity, a.cost});
            adj[a.to].push_back(edges.size());
            edges.push_back({a.from, 0.0, -a.cost});
        }
    }

    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> adj;
};

double capacity_scale(const FlowNetwork& net) {
    double s = 1.0;
    for (const auto& a : net.arcs)
        if (std::isfinite(a.capacity)) s = std::max(s, a.capacity);
    return s;
}

}  // namespace

FlowResult solve_min_cost_flow(const FlowNetwork& net, double required_flow) {
    net.validate();
    if (!(required_flow >= 0.0)) throw InvalidArgument("required flow must be nonnegative");

    Residual g(net);
    const std::size_t n = net.num_nodes;
    const double eps = 1e-12 * capacity_scale(net);

    // Bellman-Ford for initial potentials (costs may be negative).
    std::vector<double> potential(n, 0.0);
    for (std::size_t round = 0; round < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u)
            for (auto e : g.adj[u]) {
                const auto& edge = g.edges[e];
                if (edge.cap <= eps) continue;
                if (potential[u] + edge.cost < potential[edge.to] - 1e-15) {
                    potential[edge.to] = potential[u] + edge.cost;
                    changed = true;
                }
            }
        if (!changed) break;
        if (round + 1 == n) throw InvalidArgument("network contains a negative-cost cycle");
    }

    FlowResult result;
    double remaining = required_flow;
    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    using Item = std::pair<double, std::size_t>;

    while (remaining > eps) {
        std::fill(dist.begin(), dist.end(), kDistInf);
        std::fill(via.begin(), via.end(), g.edges.size());
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[net.source] = 0.0;
        heap.emplace(0.0, net.source);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            for (auto e : g.adj[u]) {
                const auto& edge = g.edges[e];
                if (edge.cap <= eps) continue;
                const double reduced = std::max(0.0, edge.cost + potential[u] - potential[edge.to]);
                if (dist[u] + reduced < dist[edge.to]) {
                    dist[edge.to] = dist[u] + reduced;
                    via[edge.to] = e;
                    heap.emplace(dist[edge.to], edge.to);
                }
            }
        }
        if (dist[net.sink] == kDistInf) break;
        for (std::size_t v = 0; v < n; ++v)
            if (dist[v] < kDistInf) potential[v] += dist[v];

        double push = remaining;
        for (auto v = net.sink; v != net.source;) {
            const auto e = via[v];
            push = std::min(push, g.edges[e].cap);
            v = g.edges[e ^ 1].to;
        }
        for (auto v = net.sink; v != net.source;) {
            const auto e = via[v];
            g.edges[e].cap -= push;
            g.edges[e ^ 1].cap += push;
            v = g.edges[e ^ 1].to;
        }
        remaining -= push;
        result.value += push;
    }

    result.arc_flow.resize(net.arcs.size());
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        result.arc_flow[k] = g.edges[2 * k + 1].cap;
        result.cost += result.arc_flow[k] * net.arcs[k].cost;
    }
    result.status = remaining > 1e-9 * std::max(1.0, required_flow) ? FlowStatus::Infeasible
                                                                    : FlowStatus::Optimal;
    return result;
}

double max_flow_value(const FlowNetwork& net) {
    net.validate();
    Residual g(net);
    const std::size_t n = net.num_nodes;
    const double eps = 1e-12 * capacity_scale(net);
    std::vector<int> level(n);
    std::vector<std::size_t> next(n);

    auto bfs = [&] {
        std::fill(level.begin(), level.end(), -1);
        std::queue<std::size_t> q;
        level[net.source] = 0;
        q.push(net.source);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto e : g.adj[u]) {
                const auto& edge = g.edges[e];
                if (edge.cap > eps && level[edge.to] < 0) {
                    level[edge.to] = level[u] + 1;
                    q.push(edge.to);
                }
            }
        }
        return level[net.sink] >= 0;
    };

    std::function<double(std::size_t, double)> dfs = [&](std::size_t u, double limit) -> double {
        if (u == net.sink) return limit;
        for (auto& i = next[u]; i < g.adj[u].size(); ++i) {
            const auto e = g.adj[u][i];
            auto& edge = g.edges[e];
            if (edge.cap <= eps || level[edge.to] != level[u] + 1) continue;
            const double pushed = dfs(edge.to, std::min(limit, edge.cap));
            if (pushed > eps) {
                edge.cap -= pushed;
                g.edges[e ^ 1].cap += pushed;
                return pushed;
            }
        }
        return 0.0;
    };

    double total = 0.0;
    while (bfs()) {
        std::fill(next.begin(), next.end(), 0);
        while (const double pushed = dfs(net.source, kDistInf)) {
            if (pushed <= eps) break;
            total += pushed;
        }
    }
    return total;
}

}  // namespace evcharge
