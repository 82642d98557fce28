#include <doctest.h>

#include <random>

#include "evcharge/lp.hpp"
#include "oracles.hpp"

using namespace evcharge;

namespace {

void check_certificate(const LpSolution& s) {
    CHECK(s.primal_residual <= 1e-8);
    CHECK(s.relative_gap <= 1e-7);
    CHECK(s.dual_objective <= s.objective + 1e-7 * std::max(1.0, std::abs(s.objective)));
    for (double d : s.ineq_duals) CHECK(d >= -1e-9);
    for (double d : s.lower_duals) CHECK(d >= -1e-9);
    for (double d : s.upper_duals) CHECK(d >= -1e-9);
}

}  // namespace

TEST_CASE("single bound-active variable") {
    LinearProgram lp;
    const auto x = lp.add_variable(1.0, -kInf, kInf);
    lp.add_ge({{x, 1.0}}, 3.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(3.0));
    check_certificate(s);
}

TEST_CASE("two-variable example matches vertex enumeration") {
    LinearProgram lp;
    const auto a = lp.add_variable(2.0, 0.0, 7.0);
    const auto b = lp.add_variable(1.0, 0.0, 7.0);
    lp.add_ge({{a, 1.0}, {b, 1.0}}, 5.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);

    const auto ref = oracle::vertex_min_2d(
        {2.0, 1.0}, {{-1, 0, 0}, {0, -1, 0}, {1, 0, 7}, {0, 1, 7}, {-1, -1, -5}});
    REQUIRE(ref.has_value());
    CHECK(s.objective == doctest::Approx(ref->first).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(ref->second[0]));
    CHECK(s.x[1] == doctest::Approx(ref->second[1]));
    check_certificate(s);
}

TEST_CASE("empty feasible set") {
    LinearProgram lp;
    const auto x = lp.add_variable(1.0, -kInf, kInf);
    lp.add_ge({{x, 1.0}}, 1.0);
    lp.add_le({{x, 1.0}}, 0.0);
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded objective") {
    LinearProgram lp;
    const auto x = lp.add_variable(-1.0);
    const auto y = lp.add_variable(0.0);
    lp.add_le({{x, 1.0}, {y, -1.0}}, 1.0);
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("equalities, free and upper-bounded-only variables") {
    LinearProgram lp;
    const auto x = lp.add_variable(1.0, -kInf, kInf);
    const auto y = lp.add_variable(-1.0, -kInf, 4.0);
    lp.add_eq({{x, 1.0}, {y, 1.0}}, 10.0);
    lp.add_ge({{x, 1.0}}, -2.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    // x + y = 10, y <= 4: objective x - y = 10 - 2y, minimized at y = 4.
    CHECK(s.x[1] == doctest::Approx(4.0));
    CHECK(s.objective == doctest::Approx(2.0));
    check_certificate(s);
}

TEST_CASE("repeated terms in a row are summed") {
    LinearProgram lp;
    const auto x = lp.add_variable(1.0);
    lp.add_ge({{x, 1.0}, {x, 1.0}}, 4.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(2.0));
}

TEST_CASE("validate rejects crossed bounds and bad indices") {
    LinearProgram lp;
    lp.add_variable(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(lp.validate(), InvalidArgument);
    LinearProgram lp2;
    lp2.add_variable(1.0);
    lp2.add_le({{5, 1.0}}, 1.0);
    CHECK_THROWS_AS(lp2.validate(), InvalidArgument);
}

TEST_CASE("random two-variable LPs agree with vertex enumeration") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int solved = 0;
    for (int rep = 0; rep < 300; ++rep) {
        LinearProgram lp;
        const std::array<double, 2> c{u(rng), u(rng)};
        const auto a = lp.add_variable(c[0], -5.0, 5.0);
        const auto b = lp.add_variable(c[1], -5.0, 5.0);
        std::vector<oracle::HalfPlane> rows{{-1, 0, 5}, {0, -1, 5}, {1, 0, 5}, {0, 1, 5}};
        for (int k = 0; k < 4; ++k) {
            const double p = u(rng), q = u(rng), h = u(rng);
            lp.add_le({{a, p}, {b, q}}, h);
            rows.push_back({p, q, h});
        }
        const auto ref = oracle::vertex_min_2d(c, rows);
        const auto s = solve_lp(lp);
        if (!ref) {
            CHECK(s.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.objective == doctest::Approx(ref->first).epsilon(1e-9));
        check_certificate(s);
        ++solved;
    }
    CHECK(solved > 50);
}

TEST_CASE("degenerate LP terminates") {
    // Many constraints through one vertex.
    LinearProgram lp;
    const auto x = lp.add_variable(-1.0);
    const auto y = lp.add_variable(-1.0);
    for (int k = 1; k <= 30; ++k) lp.add_le({{x, 1.0 * k}, {y, 1.0}}, 1.0 * k);
    lp.add_le({{x, 1.0}}, 1.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    check_certificate(s);
    CHECK(s.objective == doctest::Approx(-1.0));
}

TEST_CASE("solve is deterministic") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LinearProgram lp;
    for (int j = 0; j < 20; ++j) lp.add_variable(u(rng), 0.0, 1.0);
    for (int r = 0; r < 8; ++r) {
        std::vector<Term> row;
        for (std::size_t j = 0; j < 20; ++j) row.push_back({j, u(rng)});
        lp.add_ge(row, 2.0);
    }
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}
