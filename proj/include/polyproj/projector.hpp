#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polyproj/lp.hpp"
#include "polyproj/numeric.hpp"
#include "polyproj/polytope.hpp"
#include "polyproj/region.hpp"

namespace polyproj {

enum class PointClass { Interior, Exterior };

struct BpsOutcome
{
    double lambda_star = 0.0;
    std::optional<Vec> boundary_point;   // set iff Exterior
    PointClass classification = PointClass::Interior;
};

/**
 * Ray shooting from w_in toward w_gp: max lambda in [0, 1] such that
 * w_in + lambda (w_gp - w_in) is in the projection. Interior iff
 * lambda >= 1 - 1e-9. Throws InteriorPointInvalid if w_in itself is not.
 */
BpsOutcome bps(const LinearRegion& region, std::span<const double> w_in,
               std::span<const double> w_gp, lp::SolveCounter* counter = nullptr);

enum class Sense { Minimize, Maximize };

/**
 * One new boundary point on the facet through w_b: optimizes coordinate
 * `axis` of w+ subject to w+ and its mirror 2 w_b - w+ both lying in the
 * projection and (p - w_b) . (w+ - w_b) = 0 for every p in `prior`.
 * Throws ModelInfeasible, or UnboundedRegion when the facet is unbounded.
 */
Vec nbpg(const LinearRegion& region, std::span<const double> w_b, const std::vector<Vec>& prior,
         std::size_t axis, Sense sense = Sense::Minimize, lp::SolveCounter* counter = nullptr);

/**
 * n - 1 boundary points whose offsets from w_b are mutually orthogonal.
 *
 * For step i the objective is coordinate i, minimized and then maximized;
 * when both leave the point within eps of w_b the remaining coordinates are
 * tried in the same way. Throws BadBoundaryPoint when no objective moves.
 */
std::vector<Vec> obg(const LinearRegion& region, std::span<const double> w_b, double eps,
                     lp::SolveCounter* counter = nullptr);

/// Hyperplane through w_b and new_points, oriented so that `interior` is inside.
Hyperplane fit_hyperplane(std::span<const double> w_b, const std::vector<Vec>& new_points,
                          std::span<const double> interior);

/**
 * Replacement exterior point after a bad boundary point.
 *
 * With w_b_pre: the midpoint of w_ex_bad and the farthest member of the
 * segment from w_b_pre toward w_ex_bad. Without: w_ex_bad moved by
 * 1e-3 * w_max per axis in a seeded random direction, clamped to [0, w_max].
 */
Vec depa(const LinearRegion& region, std::span<const double> w_ex_bad,
         const std::optional<Vec>& w_b_pre, std::span<const double> w_max, std::uint64_t seed,
         lp::SolveCounter* counter = nullptr);

/// Facets k for which {all facets, facet k = 0, h = 0} is feasible. A facet
/// equal to h reports itself; callers drop its index.
std::vector<std::size_t> adjacent_facets(const Polytope& polytope, const Hyperplane& h,
                                         lp::SolveCounter* counter = nullptr);

struct CandidateStats
{
    std::size_t singular = 0;
    std::size_t duplicates = 0;
    std::size_t outside_polytope = 0;
    std::size_t members = 0;
};

/**
 * Vertices of the current polytope on h built from (n-1)-subsets of the
 * adjacent facets, kept only when they satisfy every facet within 1e-7 and
 * are not members of the projection.
 */
std::vector<Vec> candidate_exterior_points(const LinearRegion& region, const Polytope& polytope,
                                           const Hyperplane& h,
                                           const std::vector<std::size_t>& adjacent,
                                           CandidateStats* stats = nullptr,
                                           lp::SolveCounter* counter = nullptr);

/**
 * False iff h duplicates an existing facet, or phi_deg > 0 and some
 * Discovered facet has cosine >= cos(phi_deg) with h.
 */
bool angle_accept(const Hyperplane& h, const Polytope& polytope, double phi_deg);

struct PhgConfig
{
    double phi_deg = 0.0;
    double eps = 1e-6;
    std::size_t max_iterations = 10000;
    std::size_t depa_retry_cap = 50;
    std::uint64_t seed = 42;
    /// After the queue drains, enqueue exterior vertices of the polytope and continue.
    bool vertex_sweep = true;
    /// Upper bound on facet subsets examined by one sweep.
    std::size_t sweep_subset_limit = 2'000'000;

    void validate() const;
};

struct PhiStats
{
    std::size_t iterations = 0;
    std::size_t lp_solves = 0;
    std::size_t depa_invocations = 0;
    std::size_t discarded_by_angle = 0;
    std::size_t candidates_pruned = 0;
    std::size_t candidates_enqueued = 0;
    std::size_t bad_boundary_points = 0;
    std::size_t certification_failures = 0;
    std::size_t interior_pops = 0;
    std::size_t requeued = 0;
    std::size_t sweep_rounds = 0;
    std::size_t sweep_candidates = 0;
    bool sweep_skipped = false;
};

/// Boundary point and NBPG points that produced one Discovered facet.
struct FacetTrace
{
    std::size_t facet_index = 0;
    Vec boundary_point;
    std::vector<Vec> new_points;
};

struct PhiResult
{
    Polytope polytope;
    PhiStats stats;
    bool iteration_cap_reached = false;
    std::vector<FacetTrace> traces;
};

/**
 * Projection of the region onto w within the box [0, w_max], starting from
 * the interior point 0 and the exterior point w_max. Facet validity is
 * certified by an LP before a facet is accepted. Throws DepaExhausted.
 */
PhiResult phi_run(const LinearRegion& region, std::span<const double> w_max,
                  const PhgConfig& config = {});

}  // namespace polyproj
