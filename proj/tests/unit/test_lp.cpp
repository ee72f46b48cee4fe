#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles/brute_lp.hpp"
#include "polyproj/lp.hpp"

using namespace polyproj;
using namespace polyproj::lp;

TEST_CASE("lp::solve examples")
{
    SUBCASE("bound-attained optimum")
    {
        LpProblem p(1);
        p.objective = {-1};
        p.lo = {0};
        p.hi = {1};
        LpResult r = solve(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.z[0] == doctest::Approx(1));
    }
    SUBCASE("contradictory rows")
    {
        LpProblem p(1);
        p.objective = {1};
        p.add_ge(Vec{1}, 1);
        p.add_le(Vec{1}, 0);
        CHECK(solve(p).status == LpStatus::Infeasible);
    }
    SUBCASE("crossed bounds")
    {
        LpProblem p(1);
        p.lo = {1};
        p.hi = {0};
        CHECK(solve(p).status == LpStatus::Infeasible);
    }
    SUBCASE("diagonal cut of the unit square, checked by vertex enumeration")
    {
        LpProblem p(2);
        p.objective = {-1, -1};
        p.add_le(Vec{1, 1}, 1.5);
        p.lo = {0, 0};
        p.hi = {1, 1};
        LpResult r = solve(p);
        REQUIRE(r.status == LpStatus::Optimal);

        const auto expected = oracle::min_over_vertices(
            {-1, -1}, {{1, 1}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {1.5, 1, 1, 0, 0});
        REQUIRE(expected.has_value());
        CHECK(*expected == doctest::Approx(-1.5));
        CHECK(r.objective_value == doctest::Approx(*expected).epsilon(1e-12));
    }
    SUBCASE("unbounded")
    {
        LpProblem p(2);
        p.objective = {-1, 0};
        p.add_le(Vec{0, 1}, 1);
        CHECK(solve(p).status == LpStatus::Unbounded);
    }
    SUBCASE("free variables and upper-only bounds")
    {
        LpProblem p(2);
        p.objective = {1, -1};
        p.lo = {-kInf, -kInf};
        p.hi = {kInf, 3};
        p.add_ge(Vec{1, 0}, -2);
        LpResult r = solve(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.z[0] == doctest::Approx(-2));
        CHECK(r.z[1] == doctest::Approx(3));
        CHECK(r.objective_value == doctest::Approx(-5));
    }
    SUBCASE("redundant equalities")
    {
        LpProblem p(2);
        p.objective = {1, 2};
        p.lo = {0, 0};
        p.add_eq(Vec{1, 1}, 1);
        p.add_eq(Vec{2, 2}, 2);
        LpResult r = solve(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective_value == doctest::Approx(1));
    }
    SUBCASE("tableau dump")
    {
        LpProblem p(1);
        p.objective = {-1};
        p.lo = {0};
        p.hi = {1};
        std::ostringstream os;
        solve(p, {.tableau_dump = &os});
        CHECK(os.str().rfind("basis\t", 0) == 0);
        CHECK(os.str().find("obj2") != std::string::npos);
    }
    SUBCASE("solve counter")
    {
        SolveCounter counter;
        LpProblem p(1);
        p.lo = {0};
        solve(p, {.counter = &counter});
        feasible(p, {.counter = &counter});
        CHECK(counter.solves == 2);
    }
}

TEST_CASE("lp::feasible examples")
{
    SUBCASE("pinned inside bounds")
    {
        LpProblem p(1);
        p.lo = {0};
        p.hi = {1};
        p.add_eq(Vec{1}, 0.5);
        CHECK(feasible(p));
    }
    SUBCASE("conflicting equalities")
    {
        LpProblem p(1);
        p.add_eq(Vec{1}, 0);
        p.add_eq(Vec{1}, 1);
        CHECK_FALSE(feasible(p));
    }
    SUBCASE("parallel facets of the unit square as equalities")
    {
        LpProblem p(2);
        p.lo = {0, 0};
        p.hi = {1, 1};
        p.add_eq(Vec{1, 0}, 1);
        p.add_eq(Vec{1, 0}, 0);
        CHECK_FALSE(feasible(p));
    }
}

namespace {

struct RandomLp
{
    LpProblem lp;
    std::vector<oracle::Row> a;   // all constraints as A x <= b, for the oracle
    std::vector<double> b;
};

RandomLp random_bounded_lp(std::mt19937_64& rng, std::size_t n, std::size_t rows)
{
    std::uniform_real_distribution<double> u(-1, 1);
    RandomLp out{LpProblem(n), {}, {}};
    for (std::size_t j = 0; j < n; ++j) {
        out.lp.objective[j] = u(rng);
        out.lp.lo[j] = -1 - std::abs(u(rng));
        out.lp.hi[j] = 1 + std::abs(u(rng));
        oracle::Row up(n, 0.0), dn(n, 0.0);
        up[j] = 1;
        dn[j] = -1;
        out.a.push_back(up);
        out.b.push_back(out.lp.hi[j]);
        out.a.push_back(dn);
        out.b.push_back(-out.lp.lo[j]);
    }
    for (std::size_t i = 0; i < rows; ++i) {
        Vec row(n);
        for (double& v : row) v = u(rng);
        // rhs keeps the origin feasible
        const double rhs = 0.2 + std::abs(u(rng));
        out.lp.add_le(row, rhs);
        out.a.push_back(oracle::Row(row.begin(), row.end()));
        out.b.push_back(rhs);
    }
    return out;
}

}  // namespace

TEST_CASE("lp::solve randomized properties")
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + t % 8;
        const std::size_t rows = t % 13;
        RandomLp r = random_bounded_lp(rng, n, rows);
        LpResult res = solve(r.lp);
        REQUIRE(res.status == LpStatus::Optimal);

        // Objective recomputed from z.
        CHECK(std::abs(dot(r.lp.objective, res.z) - res.objective_value) <= 1e-8);

        // Constraint satisfaction at the reporting tolerance.
        for (std::size_t i = 0; i < r.a.size(); ++i) {
            CHECK(dot(r.a[i], res.z) <= r.b[i] + 1e-8);
        }

        // Determinism: bitwise identical z.
        LpResult again = solve(r.lp);
        CHECK(again.z == res.z);

        // Feasibility consistency.
        LpProblem zero = r.lp;
        std::fill(zero.objective.begin(), zero.objective.end(), 0.0);
        CHECK(feasible(r.lp) == (solve(zero).status != LpStatus::Infeasible));

        // Independent optimum by vertex enumeration on the small ones.
        if (n <= 3) {
            const auto best = oracle::min_over_vertices(r.lp.objective, r.a, r.b);
            REQUIRE(best.has_value());
            CHECK(res.objective_value == doctest::Approx(*best).epsilon(1e-9));
        }
    }
}

TEST_CASE("lp::solve with equalities against enumeration")
{
    // x in R^3, one equality eliminated by hand: x3 = 1 - x1 - x2.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 100; ++t) {
        LpProblem p(3);
        p.objective = {u(rng), u(rng), u(rng)};
        p.lo = {0, 0, 0};
        p.add_eq(Vec{1, 1, 1}, 1);
        const Vec extra{u(rng), u(rng), u(rng)};
        const double rhs = 0.5 + std::abs(u(rng));
        p.add_le(extra, rhs);
        LpResult res = solve(p);
        REQUIRE(res.status == LpStatus::Optimal);

        // Reduced problem over (x1, x2).
        const double c1 = p.objective[0] - p.objective[2];
        const double c2 = p.objective[1] - p.objective[2];
        std::vector<oracle::Row> a{{-1, 0}, {0, -1}, {1, 1},
                                   {extra[0] - extra[2], extra[1] - extra[2]}};
        std::vector<double> b{0, 0, 1, rhs - extra[2]};
        const auto best = oracle::min_over_vertices({c1, c2}, a, b);
        REQUIRE(best.has_value());
        CHECK(res.objective_value == doctest::Approx(*best + p.objective[2]).epsilon(1e-9));
    }
}
