#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyproj/case_io.hpp"
#include "polyproj/lp.hpp"
#include "polyproj/numeric.hpp"

namespace polyproj {

/// Buses hosting renewable generation and their capacities (per-unit).
struct RegSpec
{
    std::vector<int> nodes;
    Vec w_max;
};

void validate(const NetworkCase& c, const RegSpec& reg);

struct RegionOptions
{
    /// Requires p_last, ramp_up and ramp_dn on every generator.
    bool ramp = false;
    /// Adds the to->from flow rows alongside the from->to rows.
    bool reverse_branch_rows = false;
};

/**
 * Polyhedron { z = (w, x) : a_eq z == b_eq, a_in z <= b_in }.
 *
 * The first n_w columns are the projected coordinates w. `columns` names every
 * column; `w_max` (optional, may be empty) is the projection box used by the
 * projector.
 */
struct LinearRegion
{
    std::size_t n_w = 0;
    std::size_t n_x = 0;
    Mat a_eq;
    Vec b_eq;
    Mat a_in;
    Vec b_in;
    std::vector<std::string> columns;
    std::vector<int> reg_nodes;
    Vec w_max;

    std::size_t num_cols() const { return n_w + n_x; }

    /// Column of a named variable, e.g. "v[3]". Throws ValidationError if unknown.
    std::size_t column(std::string_view name) const;

    /// Checks block shapes and finiteness. Throws ValidationError.
    void check_shape() const;
};

/**
 * Builds a generic region. Columns are named w1..wn, x1..xm; `n_w` must not
 * exceed the column count of the blocks.
 */
LinearRegion make_region(std::size_t n_w, Mat a_eq, Vec b_eq, Mat a_in, Vec b_in);

/**
 * Linearized power-flow region at (v, theta) = (1, 0).
 *
 * Column order: w in RegSpec order, then v and theta by ascending bus id, then
 * pg and qg by generator (ascending bus id, ties in input order). Throws
 * ValidationError when the inputs are inconsistent or the region with w = 0 is
 * empty.
 */
LinearRegion build_linear_region(const NetworkCase& c, const RegSpec& reg,
                                 const RegionOptions& opts = {});

/// True iff some x makes (w, x) a point of the region.
bool membership(const LinearRegion& region, std::span<const double> w,
                lp::SolveCounter* counter = nullptr);

/// max c . w over the projection; nullopt when unbounded. Throws
/// ValidationError on a dimension mismatch or an empty region.
std::optional<double> support_value(const LinearRegion& region, std::span<const double> c,
                                    lp::SolveCounter* counter = nullptr);

/**
 * Affine substitution w = base + map z, where z are the LP variables.
 * `map` has n_w rows and as many columns as the LP.
 */
struct AffineW
{
    Vec base;
    Mat map;
};

/// Appends the region rows to `lp` with w replaced by `w` and x placed at
/// columns [x_offset, x_offset + n_x).
void append_region_rows(lp::LpProblem& lp, const LinearRegion& region, const AffineW& w,
                        std::size_t x_offset);

}  // namespace polyproj
