#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/random_region.hpp"
#include "polyproj/errors.hpp"
#include "polyproj/projector.hpp"

using namespace polyproj;

namespace {

LinearRegion w_only(Mat a, Vec b)
{
    return make_region(a.cols(), Mat{}, {}, std::move(a), std::move(b));
}

LinearRegion unit_box()
{
    return w_only(Mat{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {1, 1, 0, 0});
}

LinearRegion triangle()
{
    return w_only(Mat{{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1});
}

LinearRegion toy()
{
    return make_region(2, Mat{{1, 1, -1}}, {0},
                       Mat{{0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {1, 0, 0}, {0, 1, 0}},
                       {1.5, 0, 0, 1, 1});
}

bool near(const Vec& a, const Vec& b, double tol = 1e-9)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("bps examples")
{
    const Vec origin{0, 0};
    SUBCASE("ray through the corner")
    {
        BpsOutcome o = bps(unit_box(), origin, Vec{2, 2});
        CHECK(o.lambda_star == doctest::Approx(0.5));
        CHECK(o.classification == PointClass::Exterior);
        REQUIRE(o.boundary_point);
        CHECK(near(*o.boundary_point, {1, 1}));
    }
    SUBCASE("interior target")
    {
        BpsOutcome o = bps(unit_box(), origin, Vec{0.5, 0.25});
        CHECK(o.lambda_star == doctest::Approx(1));
        CHECK(o.classification == PointClass::Interior);
        CHECK_FALSE(o.boundary_point);
    }
    SUBCASE("diagonal facet of the triangle")
    {
        BpsOutcome o = bps(triangle(), origin, Vec{1, 1});
        CHECK(o.lambda_star == doctest::Approx(0.5));
        REQUIRE(o.boundary_point);
        CHECK(near(*o.boundary_point, {0.5, 0.5}));
    }
    SUBCASE("invalid interior point")
    {
        CHECK_THROWS_AS(bps(unit_box(), Vec{-1, 0}, Vec{1, 1}), InteriorPointInvalid);
    }
}

TEST_CASE("nbpg examples")
{
    SUBCASE("triangle diagonal")
    {
        CHECK(near(nbpg(triangle(), Vec{0.5, 0.5}, {}, 0), {0, 1}));
    }
    SUBCASE("box vertex does not move")
    {
        CHECK(near(nbpg(unit_box(), Vec{1, 1}, {}, 0), {1, 1}));
        CHECK(near(nbpg(unit_box(), Vec{1, 1}, {}, 0, Sense::Maximize), {1, 1}));
    }
    SUBCASE("face parallel to the objective axis")
    {
        Vec q = nbpg(unit_box(), Vec{1, 0.5}, {}, 0);
        CHECK(q[0] == doctest::Approx(1));
        CHECK((std::abs(q[1]) < 1e-9 || std::abs(q[1] - 1) < 1e-9));
    }
}

TEST_CASE("obg examples")
{
    SUBCASE("triangle")
    {
        auto pts = obg(triangle(), Vec{0.5, 0.5}, 1e-6);
        REQUIRE(pts.size() == 1);
        CHECK(near(pts[0], {0, 1}));
    }
    SUBCASE("box vertex")
    {
        CHECK_THROWS_AS(obg(unit_box(), Vec{1, 1}, 1e-6), BadBoundaryPoint);
        try {
            obg(unit_box(), Vec{1, 1}, 1e-6);
        } catch (const BadBoundaryPoint& e) {
            CHECK(near(e.point(), {1, 1}));
        }
    }
    SUBCASE("3-D simplex facet")
    {
        const LinearRegion s =
            w_only(Mat{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {1, 1, 1}}, {0, 0, 0, 1});
        const Vec wb{1.0 / 3, 1.0 / 3, 1.0 / 3};
        auto pts = obg(s, wb, 1e-6);
        REQUIRE(pts.size() == 2);
        Vec d0(3), d1(3);
        for (std::size_t i = 0; i < 3; ++i) {
            d0[i] = pts[0][i] - wb[i];
            d1[i] = pts[1][i] - wb[i];
        }
        CHECK(std::abs(dot(d0, d1)) <= 1e-8 * norm2(d0) * norm2(d1));
        for (const Vec& p : pts) CHECK(p[0] + p[1] + p[2] == doctest::Approx(1).epsilon(1e-9));
    }
    SUBCASE("facet orthogonal to the first axis")
    {
        // w1 <= 0.5 inside the unit box: coordinate 1 is constant on the facet.
        const LinearRegion r = w_only(Mat{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {0.5, 1, 0, 0});
        auto pts = obg(r, Vec{0.5, 0.3}, 1e-6);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0][0] == doctest::Approx(0.5));
        CHECK(std::abs(pts[0][1] - 0.3) > 1e-6);
    }
}

TEST_CASE("fit_hyperplane examples")
{
    SUBCASE("line through two points")
    {
        Hyperplane h = fit_hyperplane(Vec{0.5, 0.5}, {{0, 1}}, Vec{0, 0});
        CHECK(h.normal[0] == doctest::Approx(std::sqrt(0.5)));
        CHECK(h.normal[1] == doctest::Approx(std::sqrt(0.5)));
        CHECK(h.offset == doctest::Approx(-std::sqrt(0.5)));
    }
    SUBCASE("unit simplex facet")
    {
        Hyperplane h = fit_hyperplane(Vec{1, 0, 0}, {{0, 1, 0}, {0, 0, 1}}, Vec{0, 0, 0});
        const double s = 1 / std::sqrt(3.0);
        for (double c : h.normal) CHECK(c == doctest::Approx(s));
        CHECK(h.offset == doctest::Approx(-s));
    }
    SUBCASE("duplicate points")
    {
        CHECK_THROWS_AS(fit_hyperplane(Vec{0.5, 0.5}, {{0.5, 0.5}}, Vec{0, 0}), RankError);
    }
}

TEST_CASE("depa examples")
{
    const Vec wmax{1, 1};
    SUBCASE("segment leaves the box immediately")
    {
        Vec p = depa(unit_box(), Vec{2, 2}, Vec{1, 0.5}, wmax, 1);
        CHECK(near(p, {1.5, 1.25}));
    }
    SUBCASE("segment exits at w1 = 1")
    {
        Vec p = depa(unit_box(), Vec{2, 0.5}, Vec{0.5, 0.5}, wmax, 1);
        CHECK(near(p, {1.5, 0.5}));
    }
    SUBCASE("first iteration jitter")
    {
        Vec a = depa(unit_box(), Vec{1, 1}, std::nullopt, wmax, 42);
        Vec b = depa(unit_box(), Vec{1, 1}, std::nullopt, wmax, 42);
        CHECK(a == b);
        for (double v : a) {
            CHECK(v <= 1.0);
            CHECK(v >= 1.0 - 1e-3);
            CHECK(v < 1.0);   // clamping turns outward steps inward
        }
        CHECK(depa(unit_box(), Vec{1, 1}, std::nullopt, wmax, 43) != a);
    }
}

TEST_CASE("adjacent_facets examples")
{
    const Polytope sq = Polytope::box({1, 1});
    // Facet order: w1 <= 1, w2 <= 1, -w1 <= 0, -w2 <= 0.
    SUBCASE("parallel facets cannot meet")
    {
        auto adj = adjacent_facets(sq, sq.facets[0]);
        CHECK(std::count(adj.begin(), adj.end(), 1) == 1);
        CHECK(std::count(adj.begin(), adj.end(), 3) == 1);
        CHECK(std::count(adj.begin(), adj.end(), 2) == 0);
    }
    SUBCASE("triangle diagonal meets both axes")
    {
        Polytope t;
        t.dimension = 2;
        t.add({{-1, 0}, 0}, Provenance::InitialBox);
        t.add({{0, -1}, 0}, Provenance::InitialBox);
        const Hyperplane diag{{std::sqrt(0.5), std::sqrt(0.5)}, -std::sqrt(0.5)};
        t.add(diag, Provenance::Discovered);
        auto adj = adjacent_facets(t, diag);
        CHECK(std::count(adj.begin(), adj.end(), 0) == 1);
        CHECK(std::count(adj.begin(), adj.end(), 1) == 1);
    }
    SUBCASE("a duplicate of h reports adjacent")
    {
        auto adj = adjacent_facets(sq, Hyperplane{{1, 0}, -1});
        CHECK(std::count(adj.begin(), adj.end(), 0) == 1);
    }
}

TEST_CASE("candidate_exterior_points examples")
{
    SUBCASE("toy projection is complete after the diagonal facet")
    {
        Polytope p = Polytope::box({1, 1});
        const double s = std::sqrt(0.5);
        const Hyperplane diag{{s, s}, -1.5 * s};
        p.add(diag, Provenance::Discovered);
        auto adj = adjacent_facets(p, diag);
        std::erase(adj, p.facets.size() - 1);
        CHECK(adj == std::vector<std::size_t>{0, 1});
        CandidateStats st;
        auto c = candidate_exterior_points(toy(), p, diag, adj, &st);
        CHECK(c.empty());
        CHECK(st.members == 2);
    }
    SUBCASE("a facet that is too loose leaves exterior vertices")
    {
        // Region: x = w1, x <= 0.5, 0 <= w <= 1.
        const LinearRegion r = make_region(
            2, Mat{{1, 0, -1}}, {0},
            Mat{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}}, {0.5, 1, 1, 0, 0});
        Polytope p = Polytope::box({1, 1});
        const Hyperplane h{{1, 0}, -0.8};
        p.add(h, Provenance::Discovered);
        auto adj = adjacent_facets(p, h);
        std::erase(adj, p.facets.size() - 1);
        auto c = candidate_exterior_points(r, p, h, adj);
        // Both ends of w1 = 0.8 in the box lie outside the projection w1 <= 0.5.
        REQUIRE(c.size() == 2);
        bool top = false;
        for (const Vec& v : c) {
            CHECK_FALSE(membership(r, v));
            CHECK(p.max_violation(v) <= 1e-7);
            top = top || near(v, {0.8, 1});
        }
        CHECK(top);
    }
    SUBCASE("one adjacent facet gives one system in the plane")
    {
        Polytope p;
        p.dimension = 2;
        p.add({{0, -1}, 0}, Provenance::InitialBox);
        const Hyperplane h{{1, 0}, -2};
        p.add(h, Provenance::Discovered);
        CandidateStats st;
        auto c = candidate_exterior_points(unit_box(), p, h, {0}, &st);
        REQUIRE(c.size() == 1);
        CHECK(near(c[0], {2, 0}));
    }
}

TEST_CASE("angle_accept examples")
{
    Polytope p = Polytope::box({1, 1});
    const Hyperplane diag{{std::sqrt(0.5), std::sqrt(0.5)}, -1};
    CHECK(angle_accept(diag, p, 0));
    CHECK_FALSE(angle_accept(Hyperplane{{1, 0}, -1}, p, 0));

    const double a = 3 * std::numbers::pi / 180;
    p.add({{std::cos(a), std::sin(a)}, -0.9}, Provenance::Discovered);
    CHECK_FALSE(angle_accept(Hyperplane{{1, 0}, -0.95}, p, 5));
    CHECK(angle_accept(Hyperplane{{1, 0}, -0.95}, p, 2));
    CHECK(angle_accept(Hyperplane{{1, 0}, -0.95}, p, 0));
}

TEST_CASE("phi_run examples")
{
    SUBCASE("toy region")
    {
        PhiResult r = phi_run(toy(), Vec{1, 1});
        CHECK_FALSE(r.iteration_cap_reached);
        REQUIRE(r.polytope.facets.size() == 5);
        CHECK(r.polytope.count(Provenance::InitialBox) == 4);
        REQUIRE(r.polytope.count(Provenance::Discovered) == 1);
        const Hyperplane& h = r.polytope.facets[4];
        const double s = std::sqrt(0.5);
        CHECK(h.normal[0] == doctest::Approx(s));
        CHECK(h.normal[1] == doctest::Approx(s));
        CHECK(h.offset == doctest::Approx(-1.5 * s));
    }
    SUBCASE("box only")
    {
        PhiResult r = phi_run(unit_box(), Vec{1, 1});
        CHECK(r.polytope.facets.size() == 4);
        CHECK(r.polytope.count(Provenance::Discovered) == 0);
        CHECK(r.stats.interior_pops >= 1);
    }
    SUBCASE("box corner needs DEPA")
    {
        const LinearRegion half =
            w_only(Mat{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {0.5, 0.5, 0, 0});
        PhiResult r = phi_run(half, Vec{1, 1});
        CHECK(r.stats.depa_invocations >= 1);
        CHECK(r.polytope.count(Provenance::Discovered) == 2);
        for (const Vec& w : {Vec{0.5, 0.5}, Vec{0.25, 0.5}, Vec{0, 0}}) {
            CHECK(r.polytope.max_violation(w) <= 1e-9);
        }
        for (const Vec& w : {Vec{0.51, 0.2}, Vec{0.2, 0.51}}) CHECK(r.polytope.max_violation(w) > 0);
    }
    SUBCASE("bad config")
    {
        CHECK_THROWS_AS(phi_run(toy(), Vec{1, 1}, {.phi_deg = -1}), ValidationError);
        CHECK_THROWS_AS(phi_run(toy(), Vec{1, 1}, {.eps = 0}), ValidationError);
        CHECK_THROWS_AS(phi_run(toy(), Vec{1}), ValidationError);
    }
}

TEST_CASE("phi_run properties on random regions")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const LinearRegion region = oracle::random_region(rng);
        const std::size_t n = region.n_w;
        const PhiResult r = phi_run(region, region.w_max);
        REQUIRE_FALSE(r.iteration_cap_reached);

        // Every discovered facet is valid and supporting.
        for (std::size_t k = 0; k < r.polytope.facets.size(); ++k) {
            if (r.polytope.provenance[k] != Provenance::Discovered) continue;
            const Hyperplane& h = r.polytope.facets[k];
            const auto top = support_value(region, h.normal);
            REQUIRE(top);
            CHECK(*top + h.offset <= 1e-7);
            CHECK(std::abs(*top + h.offset) <= 1e-6);
        }

        // Orthogonal generating sets; points and mirrors are members.
        for (const FacetTrace& tr : r.traces) {
            for (std::size_t a = 0; a < tr.new_points.size(); ++a) {
                Vec da(n), mirror(n);
                for (std::size_t i = 0; i < n; ++i) {
                    da[i] = tr.new_points[a][i] - tr.boundary_point[i];
                    mirror[i] = 2 * tr.boundary_point[i] - tr.new_points[a][i];
                }
                CHECK(membership(region, tr.new_points[a]));
                CHECK(membership(region, mirror));
                for (std::size_t b = a + 1; b < tr.new_points.size(); ++b) {
                    Vec db(n);
                    for (std::size_t i = 0; i < n; ++i) db[i] = tr.new_points[b][i] - tr.boundary_point[i];
                    CHECK(std::abs(dot(da, db)) <= 1e-8 * norm2(da) * norm2(db));
                }
            }
        }

        // Sampled agreement with the membership LP, away from facets.
        for (int s = 0; s < 200; ++s) {
            Vec w(n);
            for (double& v : w) v = u(rng);
            const double margin = r.polytope.max_violation(w);
            if (std::abs(margin) <= 1e-7) continue;
            CHECK((margin < 0) == membership(region, w));
        }

        // Determinism.
        const PhiResult again = phi_run(region, region.w_max);
        REQUIRE(again.polytope.facets.size() == r.polytope.facets.size());
        for (std::size_t k = 0; k < r.polytope.facets.size(); ++k) {
            CHECK(again.polytope.facets[k].normal == r.polytope.facets[k].normal);
            CHECK(again.polytope.facets[k].offset == r.polytope.facets[k].offset);
        }
    }
}

TEST_CASE("bps and obg invariants on random calls")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int exterior = 0;
    for (int t = 0; t < 100; ++t) {
        const LinearRegion region = oracle::random_region(rng);
        const std::size_t n = region.n_w;
        const Vec w_in(n, 0.0);
        Vec w_gp(n);
        for (double& v : w_gp) v = 2 * u(rng);
        const BpsOutcome o = bps(region, w_in, w_gp);
        if (o.classification == PointClass::Interior) {
            CHECK(membership(region, w_gp));
            continue;
        }
        ++exterior;
        const Vec& wb = *o.boundary_point;
        CHECK(membership(region, wb));
        Vec beyond(n);
        for (std::size_t i = 0; i < n; ++i) beyond[i] = (o.lambda_star + 1e-4) * w_gp[i];
        CHECK_FALSE(membership(region, beyond));

        try {
            const auto pts = obg(region, wb, 1e-6);
            for (const Vec& p : pts) {
                Vec mirror(n);
                for (std::size_t i = 0; i < n; ++i) mirror[i] = 2 * wb[i] - p[i];
                CHECK(membership(region, p));
                CHECK(membership(region, mirror));
            }
        } catch (const BadBoundaryPoint&) {
            // Vertices and ridges are legitimately bad.
        }
    }
    CHECK(exterior > 20);
}

TEST_CASE("incremental polytopes: sound candidates and shrinking regions")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 15; ++t) {
        const LinearRegion region = oracle::random_region(rng);
        const PhiResult r = phi_run(region, region.w_max);
        const std::size_t n = region.n_w;

        // Replay the accepted facets in order.
        Polytope poly = Polytope::box(region.w_max);
        std::vector<Vec> samples(300, Vec(n));
        for (Vec& w : samples) {
            for (double& v : w) v = u(rng);
        }
        for (std::size_t k = poly.facets.size(); k < r.polytope.facets.size(); ++k) {
            const Polytope before = poly;
            const Hyperplane& h = r.polytope.facets[k];
            poly.add(h, r.polytope.provenance[k]);
            std::vector<std::size_t> adj = adjacent_facets(poly, h);
            std::erase(adj, poly.facets.size() - 1);
            for (const Vec& c : candidate_exterior_points(region, poly, h, adj)) {
                CHECK(poly.max_violation(c) <= 1e-7);
                CHECK_FALSE(membership(region, c));
            }
            for (const Vec& w : samples) {
                if (poly.max_violation(w) <= 0) CHECK(before.max_violation(w) <= 0);
            }
        }
    }
}

TEST_CASE("membership agrees with bps classification")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const LinearRegion region = oracle::random_region(rng);
    const Vec origin(region.n_w, 0.0);
    int interior = 0;
    for (int s = 0; s < 200; ++s) {
        Vec w(region.n_w);
        for (double& v : w) v = u(rng);
        const bool inside = bps(region, origin, w).classification == PointClass::Interior;
        interior += inside;
        CHECK(inside == membership(region, w));
    }
    CHECK(interior > 0);
    CHECK(interior < 200);
}
