#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "minimax/simplex.hpp"

using namespace minimax::lp;
using Catch::Matchers::WithinAbs;

TEST_CASE("textbook maximization") {
    LinearProgram lp(2, Sense::maximize);
    lp.objective = {3, 5};
    lp.add({1, 0}, Relation::less_equal, 4);
    lp.add({0, 2}, Relation::less_equal, 12);
    lp.add({3, 2}, Relation::less_equal, 18);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::optimal);
    CHECK_THAT(sol.objective, WithinAbs(36.0, 1e-9));
    CHECK_THAT(sol.x[0], WithinAbs(2.0, 1e-9));
    CHECK_THAT(sol.x[1], WithinAbs(6.0, 1e-9));
}

TEST_CASE("minimization with >= rows needs phase one") {
    LinearProgram lp(2, Sense::minimize);
    lp.objective = {2, 3};
    lp.add({1, 1}, Relation::greater_equal, 4);
    lp.add({1, 3}, Relation::greater_equal, 6);
    lp.add({1, 0}, Relation::less_equal, 3);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::optimal);
    CHECK_THAT(sol.objective, WithinAbs(9.0, 1e-9));
    CHECK_THAT(sol.x[0], WithinAbs(3.0, 1e-9));
    CHECK_THAT(sol.x[1], WithinAbs(1.0, 1e-9));
}

TEST_CASE("equality rows, including a duplicated one") {
    LinearProgram lp(3, Sense::maximize);
    lp.objective = {1, 2, 3};
    lp.add({1, 1, 1}, Relation::less_equal, 10);
    lp.add({1, -1, 0}, Relation::equal, 2);
    lp.add({2, -2, 0}, Relation::equal, 4);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::optimal);
    CHECK_THAT(sol.objective, WithinAbs(26.0, 1e-9));
    CHECK_THAT(sol.x[0], WithinAbs(2.0, 1e-9));
    CHECK_THAT(sol.x[2], WithinAbs(8.0, 1e-9));
}

TEST_CASE("negative right-hand sides are normalized") {
    LinearProgram lp(1, Sense::minimize);
    lp.objective = {1};
    lp.add({-1}, Relation::less_equal, -2.5);  // x >= 2.5
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::optimal);
    CHECK_THAT(sol.x[0], WithinAbs(2.5, 1e-12));
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
    LinearProgram lp(4, Sense::minimize);
    lp.objective = {-0.75, 20, -0.5, 6};
    lp.add({0.25, -8, -1, 9}, Relation::less_equal, 0);
    lp.add({0.5, -12, -0.5, 3}, Relation::less_equal, 0);
    lp.add({0, 0, 1, 0}, Relation::less_equal, 1);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::optimal);
    CHECK_THAT(sol.objective, WithinAbs(-1.25, 1e-12));
    CHECK_THAT(sol.x[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(sol.x[2], WithinAbs(1.0, 1e-12));
}

TEST_CASE("infeasible and unbounded programs are reported") {
    LinearProgram bad(1, Sense::maximize);
    bad.objective = {1};
    bad.add({1}, Relation::greater_equal, 2);
    bad.add({1}, Relation::less_equal, 1);
    CHECK(solve(bad).status == Status::infeasible);

    LinearProgram open(2, Sense::maximize);
    open.objective = {1, 0};
    open.add({1, -1}, Relation::less_equal, 1);
    CHECK(solve(open).status == Status::unbounded);
}

TEST_CASE("constraint width is checked") {
    LinearProgram lp(2);
    CHECK_THROWS_AS(lp.add({1, 2, 3}, Relation::less_equal, 1), std::invalid_argument);
}

TEST_CASE("pivot limit raises") {
    LinearProgram lp(2, Sense::maximize);
    lp.objective = {3, 5};
    lp.add({1, 0}, Relation::less_equal, 4);
    lp.add({0, 2}, Relation::less_equal, 12);
    lp.add({3, 2}, Relation::less_equal, 18);
    Options opt;
    opt.max_pivots = 1;
    CHECK_THROWS_AS(solve(lp, opt), std::runtime_error);
}

// Random bounded programs: max c.x, A x <= r, x >= 0 against the dual
// min r.y, A^T y >= c, y >= 0.  Equal optima certify both solves.
TEST_CASE("random programs satisfy strong duality") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t nv = 2 + rng() % 6;
        const std::size_t m = 2 + rng() % 6;
        std::vector<Vector> a(m, Vector(nv));
        Vector r(m), c(nv);
        for (auto& row : a)
            for (double& v : row) v = unit(rng) < 0.2 ? 0.0 : unit(rng) * 2.0 - 0.3;
        // One all-positive row keeps the primal bounded.
        for (double& v : a[0]) v = 0.1 + unit(rng);
        for (double& v : r) v = unit(rng) * 5.0;
        for (double& v : c) v = unit(rng) * 2.0 - 0.5;

        LinearProgram primal(nv, Sense::maximize);
        primal.objective = c;
        for (std::size_t k = 0; k < m; ++k) primal.add(a[k], Relation::less_equal, r[k]);
        LinearProgram dual(m, Sense::minimize);
        dual.objective = r;
        for (std::size_t i = 0; i < nv; ++i) {
            Vector col(m);
            for (std::size_t k = 0; k < m; ++k) col[k] = a[k][i];
            dual.add(col, Relation::greater_equal, c[i]);
        }
        const auto ps = solve(primal);
        const auto ds = solve(dual);
        REQUIRE(ps.status == Status::optimal);
        REQUIRE(ds.status == Status::optimal);
        CHECK_THAT(ps.objective, WithinAbs(ds.objective, 1e-8));
        for (std::size_t k = 0; k < m; ++k) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < nv; ++i) lhs += a[k][i] * ps.x[i];
            CHECK(lhs <= r[k] + 1e-9);
        }
    }
}
