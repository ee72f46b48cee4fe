#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>

#include "polyproj/numeric.hpp"

namespace polyproj::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * minimize objective . z
 *   s.t.   a_eq z == b_eq
 *          a_in z <= b_in
 *          lo <= z <= hi          (either side may be infinite)
 *
 * A default-constructed problem over n variables has a zero objective, no
 * rows and free bounds.
 */
struct LpProblem
{
    Vec objective;
    Mat a_eq;
    Vec b_eq;
    Mat a_in;
    Vec b_in;
    Vec lo;
    Vec hi;

    LpProblem() = default;
    explicit LpProblem(std::size_t num_vars);

    std::size_t num_vars() const { return objective.size(); }

    void add_eq(std::span<const double> row, double rhs);
    void add_le(std::span<const double> row, double rhs);
    void add_ge(std::span<const double> row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

struct LpResult
{
    LpStatus status = LpStatus::Infeasible;
    Vec z;                           // only meaningful when Optimal
    double objective_value = 0.0;    // only meaningful when Optimal
    std::size_t iterations = 0;
};

/// Tally of solves; callers pass one in to count LP work across a run.
struct SolveCounter
{
    std::size_t solves = 0;
};

struct LpOptions
{
    /// When set, the final tableau is written here as tab-separated text.
    std::ostream* tableau_dump = nullptr;
    SolveCounter* counter = nullptr;
};

/**
 * Dense two-phase primal simplex.
 *
 * Phase 1 minimizes the sum of artificial variables and reports Infeasible
 * when that sum stays above 1e-8 (rows are equilibrated to unit max
 * coefficient first). Phase 2 uses Dantzig pricing and switches to Bland's
 * rule after 500 degenerate pivots. Fixed variables (lo == hi) are
 * substituted out before the tableau is built. Throws NumericalFailure when
 * the pivot count exceeds 100 * (rows + cols).
 */
LpResult solve(const LpProblem& p, const LpOptions& opts = {});

/// True iff phase 1 finds a feasible point; the objective is ignored.
bool feasible(const LpProblem& p, const LpOptions& opts = {});

}  // namespace polyproj::lp
