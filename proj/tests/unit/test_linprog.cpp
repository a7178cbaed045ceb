#include <doctest.h>

#include "emlp/linprog.hpp"
#include "emlp/sim.hpp"

using namespace emlp;

namespace {

LPProblem::Row row(std::vector<Rational> a, std::optional<Rational> lo,
                   std::optional<Rational> hi) {
    return LPProblem::Row{std::move(a), std::move(lo), std::move(hi)};
}

} // namespace

TEST_CASE("box-bounded single variable") {
    LPProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.rows.push_back(row({1}, Rational(0), Rational(1)));
    for (auto mode : {LPMode::Exact, LPMode::Float}) {
        auto sol = solve(p, mode);
        CHECK(sol.status == LPStatus::Optimal);
        CHECK(sol.objective == 1);
        CHECK(sol.max_violation == 0);
    }
}

TEST_CASE("unbounded ray") {
    LPProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.rows.push_back(row({1}, Rational(0), std::nullopt));
    CHECK(solve(p, LPMode::Exact).status == LPStatus::Unbounded);
    CHECK(solve(p, LPMode::Float).status == LPStatus::Unbounded);
}

TEST_CASE("infeasible system") {
    LPProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.rows.push_back(row({1}, Rational(2), std::nullopt));
    p.rows.push_back(row({1}, std::nullopt, Rational(1)));
    CHECK(solve(p, LPMode::Exact).status == LPStatus::Infeasible);
    CHECK(solve(p, LPMode::Float).status == LPStatus::Infeasible);
}

TEST_CASE("phase 1 repairs an origin-infeasible start") {
    // maximize -x + y with 1 <= x <= 2, x + y <= 3, y >= 0
    LPProblem p;
    p.num_vars = 2;
    p.objective = {-1, 1};
    p.rows.push_back(row({1, 0}, Rational(1), Rational(2)));
    p.rows.push_back(row({1, 1}, std::nullopt, Rational(3)));
    p.rows.push_back(row({0, 1}, Rational(0), std::nullopt));
    auto sol = solve(p, LPMode::Exact);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.x == std::vector<Rational>{1, 2});
    CHECK(sol.objective == 1);
}

TEST_CASE("degenerate equalities") {
    // x + y = 1, x - y = 1  ->  x = 1, y = 0; maximize y
    LPProblem p;
    p.num_vars = 2;
    p.objective = {0, 1};
    p.rows.push_back(row({1, 1}, Rational(1), Rational(1)));
    p.rows.push_back(row({1, -1}, Rational(1), Rational(1)));
    auto sol = solve(p, LPMode::Exact);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.x == std::vector<Rational>{1, 0});
}

TEST_CASE("exact mode is reproducible bit for bit") {
    LPProblem p;
    p.num_vars = 3;
    p.objective = {3, -1, 2};
    p.rows.push_back(row({1, 1, 1}, std::nullopt, Rational(4)));
    p.rows.push_back(row({1, -1, 0}, Rational(-1), Rational(2)));
    p.rows.push_back(row({0, 1, 2}, Rational(0), Rational(5)));
    p.rows.push_back(row({1, 0, 0}, Rational(0), std::nullopt));
    p.rows.push_back(row({0, 1, 0}, Rational(0), std::nullopt));
    p.rows.push_back(row({0, 0, 1}, Rational(0), std::nullopt));
    auto a = solve(p, LPMode::Exact);
    auto b = solve(p, LPMode::Exact);
    REQUIRE(a.status == LPStatus::Optimal);
    CHECK(a.x == b.x);
    CHECK(a.objective == b.objective);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("weak duality against random feasible points") {
    CounterRng rng(41, 0);
    for (int trial = 0; trial < 20; ++trial) {
        // random bounded problem: box plus random <= rows
        int n = 2 + int(rng.next_u64() % 3);
        LPProblem p;
        p.num_vars = n;
        for (int j = 0; j < n; ++j) {
            p.objective.push_back(Rational(int(rng.next_u64() % 9) - 4));
            std::vector<Rational> e(n, Rational(0));
            e[j] = 1;
            p.rows.push_back(row(std::move(e), Rational(0), Rational(3)));
        }
        for (int r = 0; r < 2; ++r) {
            std::vector<Rational> a(n);
            for (auto& v : a) v = int(rng.next_u64() % 5) - 2;
            p.rows.push_back(row(std::move(a), std::nullopt, Rational(int(rng.next_u64() % 6))));
        }
        auto sol = solve(p, LPMode::Exact);
        if (sol.status != LPStatus::Optimal) continue;
        // sample random points in the box; any feasible one must not beat z*
        for (int s = 0; s < 40; ++s) {
            std::vector<Rational> x(n);
            for (auto& v : x) v = Rational(int(rng.next_u64() % 7), 2);
            bool feasible = true;
            for (const auto& rw : p.rows) {
                Rational val = 0;
                for (int j = 0; j < n; ++j) val += rw.coeffs[j] * x[j];
                if (rw.lo && val < *rw.lo) feasible = false;
                if (rw.hi && val > *rw.hi) feasible = false;
            }
            if (!feasible) continue;
            Rational obj = 0;
            for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
            CHECK(obj <= sol.objective);
        }
    }
}

TEST_CASE("float agrees with exact on random bounded problems") {
    CounterRng rng(43, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + int(rng.next_u64() % 3);
        LPProblem p;
        p.num_vars = n;
        for (int j = 0; j < n; ++j) {
            p.objective.push_back(Rational(int(rng.next_u64() % 9) - 4));
            std::vector<Rational> e(n, Rational(0));
            e[j] = 1;
            p.rows.push_back(row(std::move(e), Rational(-2), Rational(2)));
        }
        for (int r = 0; r < 3; ++r) {
            std::vector<Rational> a(n);
            for (auto& v : a) v = int(rng.next_u64() % 5) - 2;
            p.rows.push_back(row(std::move(a), std::nullopt, Rational(int(rng.next_u64() % 6))));
        }
        auto ex = solve(p, LPMode::Exact);
        auto fl = solve(p, LPMode::Float);
        REQUIRE(ex.status == LPStatus::Optimal);
        REQUIRE(fl.status == LPStatus::Optimal);
        CHECK(std::abs(to_double(ex.objective) - to_double(fl.objective)) < 1e-7);
        CHECK(to_double(fl.max_violation) < 1e-7);
    }
}
