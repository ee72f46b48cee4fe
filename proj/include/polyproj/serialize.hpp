#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polyproj/polytope.hpp"
#include "polyproj/projector.hpp"
#include "polyproj/region.hpp"
#include "polyproj/verify.hpp"

namespace polyproj {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/**
 * Region artifact: n_w, n_x, columns, variable_index, reg_nodes, w_max and
 * the dense blocks eq_block / ineq_block as {"A": rows, "b": rhs}.
 */
std::string region_to_json(const LinearRegion& region);
/// Throws ParseError on malformed text, ValidationError on inconsistent blocks.
LinearRegion region_from_json(std::string_view text);

/// Run metadata stored next to the facets. Timings are left out so files stay reproducible.
struct ProjectionInfo
{
    PhiStats stats;
    bool iteration_cap_reached = false;
    PhgConfig config;
};

std::string polytope_to_json(const Polytope& p, const ProjectionInfo* info = nullptr);
Polytope polytope_from_json(std::string_view text);

std::string report_to_json(const ErrorReport& r, const std::vector<FacetAudit>* audit = nullptr);

/// Header w_1..w_n,in_polytope,in_region,color.
std::string samples_csv(const std::vector<SampleClass>& samples);
/// Header w_1..w_n.
std::string vertices_csv(const std::vector<Vec>& vertices);

}  // namespace polyproj
