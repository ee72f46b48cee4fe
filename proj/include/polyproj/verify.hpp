#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polyproj/lp.hpp"
#include "polyproj/polytope.hpp"
#include "polyproj/region.hpp"

namespace polyproj {

/// Green: both regions. Blue: region only. Yellow: polytope only. Red: neither.
enum class Color { Green, Blue, Yellow, Red };

std::string_view to_string(Color c);
Color color_of(bool in_polytope, bool in_region);

struct SampleClass
{
    Vec w;
    bool in_polytope = false;
    bool in_region = false;
    Color color = Color::Red;
    /// Polytope margin within the boundary tolerance; excluded from the error counts.
    bool near_boundary = false;
};

struct ErrorReport
{
    std::size_t n_samples = 0;
    std::size_t n_boundary = 0;
    /// Samples strictly inside the polytope.
    std::size_t n_SR = 0;
    /// Of those, the ones that are also in the region.
    std::size_t n_SA = 0;
    /// (1 - n_SA / n_SR) * 100; empty when n_SR == 0.
    std::optional<double> e_r;
    /// Agreement over every sample away from the boundary, not only those inside.
    std::size_t n_agree_all = 0;
    std::optional<double> e_r_all;
    std::array<std::size_t, 4> color_counts{};
    std::uint64_t seed = 0;
};

struct Classification
{
    std::vector<SampleClass> samples;
    ErrorReport report;
};

inline constexpr double kPolytopeSampleTol = 1e-9;
inline constexpr double kBoundarySampleTol = 1e-7;

/**
 * Draws n points uniformly from the polytope's bounding box with
 * mt19937_64(seed) and classifies each against the polytope and the region.
 *
 * The box is [0, box_max] when the polytope carries one, otherwise it is
 * computed by LP. Membership LPs run on `threads` workers (0 picks the
 * hardware concurrency); results do not depend on the worker count.
 */
Classification classify_samples(const LinearRegion& region, const Polytope& polytope, std::size_t n,
                                std::uint64_t seed, unsigned threads = 0);

/**
 * Projection of the region onto w by Fourier-Motzkin elimination, intersected
 * with the box [0, box] when `box` is non-empty.
 *
 * Equalities are pivoted out first. Redundant rows are removed by LP after
 * every elimination round. Facets matching the box are tagged InitialBox.
 * Throws SizeGuardExceeded when n_x > 10 or the region has more than 60
 * inequality rows.
 */
Polytope fme_project(const LinearRegion& region, std::span<const double> box);
inline Polytope fme_project(const LinearRegion& region) { return fme_project(region, region.w_max); }

struct Equivalence
{
    bool equal = false;
    double max_violation = 0.0;
};

/// Mutual inclusion by LP over each facet of the other polytope.
/// Throws UnboundedRegion when either side is unbounded along a facet normal.
Equivalence regions_equivalent(const Polytope& p, const Polytope& q, double tol);

struct FacetAudit
{
    std::size_t facet_index = 0;
    double validity_gap = 0.0;
    double support_gap = 0.0;
};

/// Support LP for each Discovered facet (c, d):
/// validity_gap = max(0, max c.w + d), support_gap = |max c.w + d|.
std::vector<FacetAudit> facet_support_audit(const LinearRegion& region, const Polytope& polytope,
                                            lp::SolveCounter* counter = nullptr);

/// Vertices of a 2-D or 3-D polytope; 2-D vertices are ordered counterclockwise.
std::vector<Vec> enumerate_vertices_2d3d(const Polytope& polytope);

}  // namespace polyproj
