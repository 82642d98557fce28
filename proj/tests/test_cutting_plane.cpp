#include <doctest.h>

#include <cmath>
#include <random>

#include "evcharge/cutting_plane.hpp"
#include "oracles.hpp"

using namespace evcharge;

namespace {

// min w1 + w2 + r ||w|| s.t. w1 + w2 = 6, w >= 0.
LinearProgram segment() {
    LinearProgram lp;
    const auto a = lp.add_variable(1.0);
    const auto b = lp.add_variable(1.0);
    lp.add_eq({{a, 1.0}, {b, 1.0}}, 6.0);
    return lp;
}

const NormMap kIdentity2 = {{{0, 1.0}}, {{1, 1.0}}};

double segment_objective(double w1, double r) { return 6.0 + r * std::hypot(w1, 6.0 - w1); }

}  // namespace

TEST_CASE("zero radius is a plain LP solve") {
    const auto lp = segment();
    const auto s = solve_norm_augmented(lp, 0.0, kIdentity2);
    const auto ref = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(ref.objective));
    CHECK(s.x == ref.x);
    CHECK(s.cuts == 0);
}

TEST_CASE("unit radius on the segment") {
    const auto [w1, best] = oracle::scan_1d([](double w) { return segment_objective(w, 1.0); }, 0.0, 6.0);
    const auto s = solve_norm_augmented(segment(), 1.0, kIdentity2);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.cut_status == CutStatus::Converged);
    CHECK(s.x[0] == doctest::Approx(w1).epsilon(1e-4));
    CHECK(s.x[1] == doctest::Approx(6.0 - w1).epsilon(1e-4));
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-6));
    CHECK(s.lower_bound <= s.objective + 1e-12);
    CHECK(s.relative_gap <= 1e-6);
}

TEST_CASE("large radius keeps the same minimizer") {
    const auto [w1, best] = oracle::scan_1d([](double w) { return segment_objective(w, 100.0); }, 0.0, 6.0);
    const auto s = solve_norm_augmented(segment(), 100.0, kIdentity2);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(w1).epsilon(1e-4));
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("infeasible LP propagates") {
    auto lp = segment();
    lp.add_le({{0, 1.0}, {1, 1.0}}, 1.0);
    CHECK(solve_norm_augmented(lp, 1.0, kIdentity2).status == LpStatus::Infeasible);
}

TEST_CASE("cut limit returns the best iterate with its gap") {
    CutOptions opts;
    opts.max_rounds = 1;
    opts.rel_tol = 1e-12;
    const auto s = solve_norm_augmented(segment(), 1.0, kIdentity2, opts);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.cut_status == CutStatus::CutLimitExceeded);
    CHECK(s.gap >= 0.0);
    CHECK(s.lower_bound <= s.objective);
}

TEST_CASE("zero norm point uses the first axis") {
    // min r ||x|| with x free in [0, 1]: optimum at 0 where the map vanishes.
    LinearProgram lp;
    lp.add_variable(0.0, 0.0, 1.0);
    lp.add_variable(0.0, 0.0, 1.0);
    const auto s = solve_norm_augmented(lp, 2.0, kIdentity2);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(0.0));
    CHECK(s.cut_status == CutStatus::Converged);
}

TEST_CASE("objective is nondecreasing in the radius and the bound is valid") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        LinearProgram lp;
        NormMap map;
        std::vector<Term> sum;
        for (std::size_t j = 0; j < 4; ++j) {
            lp.add_variable(u(rng), 0.0, 5.0);
            map.push_back({{j, u(rng)}});
            sum.push_back({j, 1.0});
        }
        lp.add_ge(sum, 6.0);
        double prev = -kInf;
        for (double r : {0.0, 0.1, 1.0, 10.0}) {
            const auto s = solve_norm_augmented(lp, r, map);
            REQUIRE(s.status == LpStatus::Optimal);
            CHECK(s.cut_status == CutStatus::Converged);
            // objective(r) >= optimum(r) >= optimum(previous r) >= its lower bound
            CHECK(s.objective >= prev - 1e-12);
            // The reported objective is the true value at the returned point.
            double lin = 0.0;
            for (std::size_t j = 0; j < 4; ++j) lin += lp.cost[j] * s.x[j];
            double nrm = 0.0;
            for (std::size_t j = 0; j < 4; ++j) nrm += std::pow(map[j][0].coef * s.x[j], 2);
            CHECK(s.objective == doctest::Approx(lin + r * std::sqrt(nrm)).epsilon(1e-9));
            CHECK(s.lower_bound <= s.objective + 1e-9);
            prev = s.lower_bound;
        }
    }
}

TEST_CASE("single row and odd row counts") {
    // min -x0 + r |x0| with x0 in [-2, 3]: optimum -3 + 3r for r < 1.
    LinearProgram lp;
    lp.add_variable(-1.0, -2.0, 3.0);
    const auto s = solve_norm_augmented(lp, 0.5, {{{0, 1.0}}});
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-1.5));

    // Three rows: min ||w|| with w0 + w1 + w2 >= 3, optimum sqrt(3) at (1, 1, 1).
    LinearProgram three;
    for (int j = 0; j < 3; ++j) three.add_variable(0.0, 0.0, 5.0);
    three.add_ge({{0, 1.0}, {1, 1.0}, {2, 1.0}}, 3.0);
    const auto t = solve_norm_augmented(three, 1.0, {{{0, 1.0}}, {{1, 1.0}}, {{2, 1.0}}});
    REQUIRE(t.status == LpStatus::Optimal);
    CHECK(t.cut_status == CutStatus::Converged);
    CHECK(t.objective == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    for (int j = 0; j < 3; ++j) CHECK(t.x[j] == doctest::Approx(1.0).epsilon(1e-3));
}
