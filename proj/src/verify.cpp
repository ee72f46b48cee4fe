#include "polyproj/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "polyproj/errors.hpp"
#include "subsets.hpp"

namespace polyproj {

std::string_view to_string(Color c)
{
    switch (c) {
        case Color::Green: return "Green";
        case Color::Blue: return "Blue";
        case Color::Yellow: return "Yellow";
        case Color::Red: return "Red";
    }
    return "Red";
}

Color color_of(bool in_polytope, bool in_region)
{
    if (in_polytope) return in_region ? Color::Green : Color::Yellow;
    return in_region ? Color::Blue : Color::Red;
}

namespace {

// max c.w over the polytope; -inf when empty, nullopt when unbounded.
std::optional<double> max_over(const Polytope& q, std::span<const double> c)
{
    lp::LpProblem p(q.dimension);
    for (std::size_t i = 0; i < q.dimension; ++i) p.objective[i] = -c[i];
    for (const Hyperplane& h : q.facets) p.add_le(h.normal, -h.offset);
    const lp::LpResult r = lp::solve(p);
    if (r.status == lp::LpStatus::Unbounded) return std::nullopt;
    if (r.status == lp::LpStatus::Infeasible) return -std::numeric_limits<double>::infinity();
    return -r.objective_value;
}

std::pair<Vec, Vec> bounding_box(const Polytope& poly)
{
    const std::size_t n = poly.dimension;
    Vec lo(n, 0.0), hi = poly.box_max;
    if (hi.size() == n) return {lo, hi};
    hi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        const auto top = max_over(poly, e);
        e[i] = -1.0;
        const auto bottom = max_over(poly, e);
        if (!top || !bottom) throw UnboundedRegion("classify_samples: polytope is unbounded");
        hi[i] = *top;
        lo[i] = -*bottom;
    }
    return {lo, hi};
}

}  // namespace

Classification classify_samples(const LinearRegion& region, const Polytope& polytope, std::size_t n,
                                std::uint64_t seed, unsigned threads)
{
    if (n == 0) throw ValidationError("classify_samples: n must be at least 1");
    if (polytope.dimension != region.n_w) throw ValidationError("classify_samples: dimension mismatch");
    const std::size_t dim = polytope.dimension;
    const auto [lo, hi] = bounding_box(polytope);

    Classification out;
    out.samples.resize(n);
    std::mt19937_64 rng(seed);
    for (SampleClass& s : out.samples) {
        s.w.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            s.w[i] = lo[i] + u * (hi[i] - lo[i]);
        }
        const double margin = polytope.max_violation(s.w);
        s.in_polytope = margin <= kPolytopeSampleTol;
        s.near_boundary = std::abs(margin) <= kBoundarySampleTol;
    }

    // Each worker owns a strided slice and only writes its own samples.
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    auto work = [&](unsigned t) {
        for (std::size_t k = t; k < n; k += threads) {
            SampleClass& s = out.samples[k];
            s.in_region = membership(region, s.w);
            s.color = color_of(s.in_polytope, s.in_region);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (std::thread& th : pool) th.join();
    }

    ErrorReport& rep = out.report;
    rep.n_samples = n;
    rep.seed = seed;
    std::size_t n_off_boundary = 0;
    for (const SampleClass& s : out.samples) {
        ++rep.color_counts[static_cast<std::size_t>(s.color)];
        if (s.near_boundary) {
            ++rep.n_boundary;
            continue;
        }
        ++n_off_boundary;
        if (s.in_polytope == s.in_region) ++rep.n_agree_all;
        if (s.in_polytope) {
            ++rep.n_SR;
            if (s.in_region) ++rep.n_SA;
        }
    }
    if (rep.n_SR > 0) {
        rep.e_r = (1.0 - static_cast<double>(rep.n_SA) / static_cast<double>(rep.n_SR)) * 100.0;
    }
    if (n_off_boundary > 0) {
        rep.e_r_all =
            (1.0 - static_cast<double>(rep.n_agree_all) / static_cast<double>(n_off_boundary)) * 100.0;
    }
    return out;
}

Equivalence regions_equivalent(const Polytope& p, const Polytope& q, double tol)
{
    if (p.dimension != q.dimension) throw ValidationError("regions_equivalent: dimension mismatch");
    Equivalence eq;
    auto check = [&](const Polytope& inner, const Polytope& outer) {
        for (const Hyperplane& h : outer.facets) {
            const auto top = max_over(inner, h.normal);
            if (!top) throw UnboundedRegion("regions_equivalent: polytope is unbounded along a facet normal");
            eq.max_violation = std::max(eq.max_violation, *top + h.offset);
        }
    };
    check(p, q);
    check(q, p);
    eq.equal = eq.max_violation <= tol;
    return eq;
}

std::vector<FacetAudit> facet_support_audit(const LinearRegion& region, const Polytope& polytope,
                                            lp::SolveCounter* counter)
{
    if (polytope.dimension != region.n_w) throw ValidationError("facet_support_audit: dimension mismatch");
    std::vector<FacetAudit> out;
    for (std::size_t k = 0; k < polytope.facets.size(); ++k) {
        if (polytope.provenance[k] != Provenance::Discovered) continue;
        const Hyperplane& h = polytope.facets[k];
        const auto top = support_value(region, h.normal, counter);
        FacetAudit a{k, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        if (top) {
            a.validity_gap = std::max(0.0, *top + h.offset);
            a.support_gap = std::abs(*top + h.offset);
        }
        out.push_back(a);
    }
    return out;
}

std::vector<Vec> enumerate_vertices_2d3d(const Polytope& polytope)
{
    const std::size_t n = polytope.dimension;
    if (n != 2 && n != 3) {
        throw ValidationError("vertex enumeration needs dimension 2 or 3, got " + std::to_string(n));
    }
    std::vector<Vec> verts;
    detail::for_each_subset(polytope.facets.size(), n, [&](const std::vector<std::size_t>& sub) {
        Mat a(0, n);
        Vec b;
        for (std::size_t k : sub) {
            a.append_row(polytope.facets[k].normal);
            b.push_back(-polytope.facets[k].offset);
        }
        Vec w;
        try {
            w = solve_square(std::move(a), std::move(b));
        } catch (const SingularError&) {
            return;
        }
        if (polytope.max_violation(w) > 1e-7) return;
        for (const Vec& v : verts) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(v[i] - w[i]));
            if (d <= 1e-7) return;
        }
        verts.push_back(std::move(w));
    });

    if (n == 2 && !verts.empty()) {
        double cx = 0.0, cy = 0.0;
        for (const Vec& v : verts) {
            cx += v[0];
            cy += v[1];
        }
        cx /= static_cast<double>(verts.size());
        cy /= static_cast<double>(verts.size());
        // Counterclockwise, starting from the lower-left direction.
        auto angle = [&](const Vec& v) {
            double a = std::atan2(v[1] - cy, v[0] - cx) + 0.75 * std::numbers::pi;
            if (a < -1e-12) a += 2 * std::numbers::pi;
            return a;
        };
        std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) { return angle(a) < angle(b); });
    } else {
        std::sort(verts.begin(), verts.end());
    }
    return verts;
}

}  // namespace polyproj
