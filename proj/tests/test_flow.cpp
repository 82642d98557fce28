#include <doctest.h>

#include <random>

#include "evcharge/flow.hpp"
#include "oracles.hpp"

using namespace evcharge;

TEST_CASE("single arc") {
    FlowNetwork net;
    net.source = net.add_node();
    net.sink = net.add_node();
    net.add_arc(0, 1, 10.0, 2.0);
    const auto r = solve_min_cost_flow(net, 5.0);
    REQUIRE(r.status == FlowStatus::Optimal);
    CHECK(r.cost == doctest::Approx(10.0));
    CHECK(r.value == doctest::Approx(5.0));
}

TEST_CASE("parallel arcs match split enumeration") {
    FlowNetwork net;
    net.source = net.add_node();
    net.sink = net.add_node();
    net.add_arc(0, 1, 5.0, 1.0);
    net.add_arc(0, 1, 5.0, 3.0);
    const auto r = solve_min_cost_flow(net, 8.0);
    REQUIRE(r.status == FlowStatus::Optimal);
    const auto ref = oracle::best_split({{5, 1.0}, {5, 3.0}}, 8);
    REQUIRE(ref.has_value());
    CHECK(r.cost == doctest::Approx(*ref));
    CHECK(r.arc_flow[0] == doctest::Approx(5.0));
    CHECK(r.arc_flow[1] == doctest::Approx(3.0));
}

TEST_CASE("required flow above capacity") {
    FlowNetwork net;
    net.source = net.add_node();
    net.sink = net.add_node();
    net.add_arc(0, 1, 10.0, 1.0);
    const auto r = solve_min_cost_flow(net, 20.0);
    CHECK(r.status == FlowStatus::Infeasible);
    CHECK(r.value == doctest::Approx(10.0));
    CHECK(max_flow_value(net) == doctest::Approx(10.0));
}

TEST_CASE("invalid network") {
    FlowNetwork net;
    net.num_nodes = 2;
    net.arcs.push_back({0, 3, 1.0, 0.0});
    CHECK_THROWS_AS(net.validate(), InvalidArgument);
    net.arcs = {{0, 1, -1.0, 0.0}};
    CHECK_THROWS_AS(net.validate(), InvalidArgument);
}

TEST_CASE("random layered networks agree with the dense reference") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> cap(0.0, 10.0), cost(-2.0, 5.0);
    for (int rep = 0; rep < 100; ++rep) {
        // source, 3 middle layers of 3 nodes, sink; arcs only go forward so
        // negative costs cannot form cycles.
        FlowNetwork net;
        for (int k = 0; k < 11; ++k) net.add_node();
        net.source = 0;
        net.sink = 10;
        oracle::DenseFlow ref(11);
        auto arc = [&](std::size_t u, std::size_t v) {
            const double c = cap(rng), w = cost(rng);
            net.add_arc(u, v, c, w);
            ref.arc(u, v, c, w);
        };
        for (std::size_t v = 1; v <= 3; ++v) arc(0, v);
        for (std::size_t u = 1; u <= 3; ++u)
            for (std::size_t v = 4; v <= 6; ++v) arc(u, v);
        for (std::size_t u = 4; u <= 6; ++u)
            for (std::size_t v = 7; v <= 9; ++v) arc(u, v);
        for (std::size_t u = 7; u <= 9; ++u) arc(u, 10);

        const double maxf = max_flow_value(net);
        const double need = 0.7 * maxf;
        const auto r = solve_min_cost_flow(net, need);
        const auto expect = ref.min_cost(0, 10, need);
        REQUIRE(expect.has_value());
        REQUIRE(r.status == FlowStatus::Optimal);
        CHECK(r.cost == doctest::Approx(*expect).epsilon(1e-9));
        CHECK(solve_min_cost_flow(net, maxf + 1.0).status == FlowStatus::Infeasible);
    }
}
