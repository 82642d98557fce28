#include <doctest.h>

#include <random>

#include "evcharge/baseline.hpp"
#include "evcharge/model.hpp"
#include "oracles.hpp"

using namespace evcharge;

namespace {

Scenario two_step(double waste) {
    return make_scenario("two-step", {2.0, 1.0}, {Window{0, 1}}, {5.0}, 300.0, 7.0, waste);
}

Schedule with_column(const Scenario& sc, std::vector<double> column) {
    Schedule s{Allocation(sc.horizon_steps, 1), Method::Nominal, sc.scenario_id};
    for (std::size_t t = 0; t < column.size(); ++t) s.allocation(t, 0) = column[t];
    return s;
}

}  // namespace

TEST_CASE("make_scenario fills occupancy from windows") {
    const auto sc = make_scenario("d", {1, 1, 1, 1}, {Window{1, 2}, std::nullopt}, {3.0, 0.0}, 300, 7, 0.01);
    CHECK(sc.horizon_steps == 4);
    CHECK(sc.num_vehicles() == 2);
    CHECK(sc.occupancy(0, 0) == 0);
    CHECK(sc.occupancy(1, 0) == 1);
    CHECK(sc.occupancy(2, 0) == 1);
    CHECK(sc.occupancy(3, 0) == 0);
    CHECK(sc.window(0) == Window{1, 2});
    CHECK_FALSE(sc.window(1).has_value());
}

TEST_CASE("check_scenario rejects broken scenarios") {
    auto sc = make_scenario("d", {1, 1, 1}, {Window{0, 2}}, {3.0}, 300, 7, 0.01);
    SUBCASE("gap in a column") {
        sc.occupancy(1, 0) = 0;
        CHECK_THROWS_AS(check_scenario(sc), InvalidArgument);
    }
    SUBCASE("load without window") {
        for (std::size_t t = 0; t < 3; ++t) sc.occupancy(t, 0) = 0;
        CHECK_THROWS_AS(check_scenario(sc), InvalidArgument);
    }
    SUBCASE("short price vector") {
        sc.prices.pop_back();
        CHECK_THROWS_AS(check_scenario(sc), ShapeMismatch);
    }
    SUBCASE("negative load") {
        sc.load[0] = -1;
        CHECK_THROWS_AS(check_scenario(sc), InvalidArgument);
    }
    SUBCASE("negative prices are allowed") {
        sc.prices[0] = -0.5;
        CHECK_NOTHROW(check_scenario(sc));
    }
}

TEST_CASE("method names round-trip") {
    for (auto m : {Method::Nominal, Method::RobustPrice, Method::RobustLoad, Method::Fcfs})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_FALSE(method_from_string("greedy").has_value());
}

TEST_CASE("evaluate_cost examples") {
    SUBCASE("zero schedule costs nothing") {
        const auto sc = two_step(0.01);
        const auto c = evaluate_cost(with_column(sc, {0, 0}), sc);
        CHECK(c.total_cost == 0.0);
        CHECK(c.total_energy_delivered == 0.0);
    }
    SUBCASE("no waste, all power in the expensive step") {
        const auto sc = two_step(0.0);
        CHECK(evaluate_cost(with_column(sc, {5, 0}), sc).total_cost == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("waste is a multiplier on delivered energy") {
        const auto sc = two_step(0.01);
        const auto c = evaluate_cost(with_column(sc, {0, 5}), sc);
        CHECK(c.total_cost == doctest::Approx(5.05).epsilon(1e-12));
        CHECK(c.per_step_cost[0] == 0.0);
        CHECK(c.total_energy_delivered == doctest::Approx(5.0));
        CHECK(c.total_energy_wasted == doctest::Approx(0.05));
    }
    SUBCASE("shape mismatch") {
        const auto sc = two_step(0.01);
        Schedule bad{Allocation(3, 1), Method::Nominal, "x"};
        CHECK_THROWS_AS(evaluate_cost(bad, sc), ShapeMismatch);
    }
}

TEST_CASE("evaluate_cost matches the definition and is linear") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto sc = oracle::random_scenario(rng);
        Allocation a(sc.horizon_steps, sc.num_vehicles()), b = a;
        for (std::size_t t = 0; t < sc.horizon_steps; ++t)
            for (std::size_t i = 0; i < sc.num_vehicles(); ++i)
                if (sc.occupancy(t, i)) a(t, i) = u(rng), b(t, i) = u(rng);
        const double alpha = u(rng), beta = u(rng);
        Allocation mix(sc.horizon_steps, sc.num_vehicles());
        double energy = 0.0, wasted = 0.0;
        for (std::size_t t = 0; t < sc.horizon_steps; ++t)
            for (std::size_t i = 0; i < sc.num_vehicles(); ++i) {
                mix(t, i) = alpha * a(t, i) + beta * b(t, i);
                energy += mix(t, i) * sc.step_hours;
                wasted += sc.waste[t] * mix(t, i) * sc.step_hours;
            }
        auto cost = [&](const Allocation& y) { return evaluate_cost({y, Method::Nominal, ""}, sc); };
        const auto cm = cost(mix);
        CHECK(cm.total_cost == doctest::Approx(oracle::cost_of(mix, sc)).epsilon(1e-9));
        CHECK(cm.total_cost ==
              doctest::Approx(alpha * cost(a).total_cost + beta * cost(b).total_cost).epsilon(1e-9));
        double sum = 0.0;
        for (double c : cm.per_step_cost) sum += c;
        CHECK(cm.total_cost == doctest::Approx(sum).epsilon(1e-9));
        CHECK(cm.total_energy_delivered == doctest::Approx(energy).epsilon(1e-9));
        CHECK(cm.total_energy_wasted == doctest::Approx(wasted).epsilon(1e-9));
    }
}

TEST_CASE("validate_schedule examples") {
    const auto sc = make_scenario("v", {1, 1}, {Window{0, 1}}, {5.0}, 300, 7, 0.0);
    SUBCASE("feasible") {
        CHECK(validate_schedule(with_column(sc, {2, 3}), sc).feasible());
    }
    SUBCASE("negative entry") {
        const auto r = validate_schedule(with_column(sc, {-0.5, 7}), sc);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].kind == ViolationKind::NegativePower);
        CHECK(r.violations[0].magnitude == doctest::Approx(0.5));
    }
    SUBCASE("socket limit") {
        const auto r = validate_schedule(with_column(sc, {7.3, 0}), sc);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].kind == ViolationKind::SocketExceeded);
        CHECK(r.violations[0].magnitude == doctest::Approx(0.3));
    }
    SUBCASE("shortfall") {
        const auto r = validate_schedule(with_column(sc, {1, 1}), sc);
        REQUIRE(r.count(ViolationKind::DemandShortfall) == 1);
        CHECK(r.violations[0].magnitude == doctest::Approx(3.0));
    }
    SUBCASE("tolerance") {
        CHECK(validate_schedule(with_column(sc, {2.5, 2.5 - 5e-9}), sc).feasible());
        CHECK_FALSE(validate_schedule(with_column(sc, {2.5, 2.5 - 5e-8}), sc).feasible());
    }
}

TEST_CASE("validate_schedule flags power outside the window and over capacity") {
    auto sc = make_scenario("w", {1, 1, 1}, {Window{1, 1}, Window{1, 2}}, {2.0, 2.0}, 5.0, 7, 0.0);
    Schedule s{Allocation(3, 2), Method::Fcfs, "w"};
    s.allocation(0, 0) = 1.0;
    s.allocation(1, 0) = 2.0;
    s.allocation(1, 1) = 4.0;
    const auto r = validate_schedule(s, sc);
    CHECK(r.count(ViolationKind::OutsideWindow) == 1);
    CHECK(r.count(ViolationKind::CapacityExceeded) == 1);
    CHECK(r.count(ViolationKind::DemandShortfall) == 0);
}
