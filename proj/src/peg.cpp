#include <cmath>
#include <numbers>
#include <set>

#include "polyproj/errors.hpp"
#include "polyproj/projector.hpp"
#include "subsets.hpp"

namespace polyproj {

namespace {

constexpr double kFacetTol = 1e-7;

lp::LpProblem facet_system(const Polytope& polytope)
{
    lp::LpProblem p(polytope.dimension);
    for (const Hyperplane& f : polytope.facets) p.add_le(f.normal, -f.offset);
    return p;
}

}  // namespace

std::vector<std::size_t> adjacent_facets(const Polytope& polytope, const Hyperplane& h,
                                         lp::SolveCounter* counter)
{
    const lp::LpProblem base = facet_system(polytope);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < polytope.facets.size(); ++k) {
        const Hyperplane& f = polytope.facets[k];
        lp::LpProblem p = base;
        p.add_eq(f.normal, -f.offset);
        p.add_eq(h.normal, -h.offset);
        if (lp::feasible(p, {.counter = counter})) out.push_back(k);
    }
    return out;
}

std::vector<Vec> candidate_exterior_points(const LinearRegion& region, const Polytope& polytope,
                                           const Hyperplane& h,
                                           const std::vector<std::size_t>& adjacent,
                                           CandidateStats* stats, lp::SolveCounter* counter)
{
    const std::size_t n = polytope.dimension;
    CandidateStats local;
    CandidateStats& st = stats ? *stats : local;
    std::vector<Vec> kept;
    std::vector<Vec> tried;

    detail::for_each_subset(adjacent.size(), n - 1, [&](const std::vector<std::size_t>& sub) {
        Mat a(0, n);
        Vec b;
        a.append_row(h.normal);
        b.push_back(-h.offset);
        for (std::size_t s : sub) {
            const Hyperplane& f = polytope.facets[adjacent[s]];
            a.append_row(f.normal);
            b.push_back(-f.offset);
        }
        Vec w;
        try {
            w = solve_square(std::move(a), std::move(b));
        } catch (const SingularError&) {
            ++st.singular;
            return;
        }
        for (const Vec& t : tried) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(t[i] - w[i]));
            if (d <= kFacetTol) {
                ++st.duplicates;
                return;
            }
        }
        tried.push_back(w);
        if (polytope.max_violation(w) > kFacetTol) {
            ++st.outside_polytope;
            return;
        }
        if (membership(region, w, counter)) {
            ++st.members;
            return;
        }
        kept.push_back(std::move(w));
    });
    return kept;
}

bool angle_accept(const Hyperplane& h, const Polytope& polytope, double phi_deg)
{
    const double cos_phi = std::cos(phi_deg * std::numbers::pi / 180.0);
    for (std::size_t k = 0; k < polytope.facets.size(); ++k) {
        const Hyperplane& f = polytope.facets[k];
        if (same_hyperplane(h, f)) return false;
        if (phi_deg > 0.0 && polytope.provenance[k] == Provenance::Discovered &&
            facet_cosine(h, f) >= cos_phi) {
            return false;
        }
    }
    return true;
}

}  // namespace polyproj
