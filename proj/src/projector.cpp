#include "polyproj/projector.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "polyproj/errors.hpp"

namespace polyproj {

namespace {

constexpr double kInteriorTol = 1e-9;

void check_dim(const LinearRegion& region, std::span<const double> w, const char* what)
{
    if (w.size() != region.n_w) {
        throw ValidationError(std::string(what) + " has " + std::to_string(w.size()) +
                              " entries, region has " + std::to_string(region.n_w));
    }
}

/// LP over (lambda, x) with w = from + lambda (to - from), lambda in [0, 1], maximizing lambda.
lp::LpResult max_along_segment(const LinearRegion& region, std::span<const double> from,
                               std::span<const double> to, lp::SolveCounter* counter)
{
    const std::size_t nw = region.n_w;
    lp::LpProblem p(1 + region.n_x);
    p.objective[0] = -1.0;
    p.lo[0] = 0.0;
    p.hi[0] = 1.0;
    AffineW w{Vec(from.begin(), from.end()), Mat(nw, p.num_vars())};
    for (std::size_t i = 0; i < nw; ++i) w.map(i, 0) = to[i] - from[i];
    append_region_rows(p, region, w, 1);
    return lp::solve(p, {.counter = counter});
}

}  // namespace

BpsOutcome bps(const LinearRegion& region, std::span<const double> w_in,
               std::span<const double> w_gp, lp::SolveCounter* counter)
{
    check_dim(region, w_in, "w_in");
    check_dim(region, w_gp, "w_gp");
    // The segment LP alone can be feasible further along the ray, so the start
    // point is checked on its own.
    if (!membership(region, w_in, counter)) {
        throw InteriorPointInvalid("bps: the interior point is not in the region");
    }
    const lp::LpResult r = max_along_segment(region, w_in, w_gp, counter);
    if (r.status == lp::LpStatus::Infeasible) {
        throw InteriorPointInvalid("bps: the interior point is not in the region");
    }
    if (r.status != lp::LpStatus::Optimal) {
        throw NumericalFailure("bps: unexpected LP status " + std::string(lp::to_string(r.status)));
    }

    BpsOutcome out;
    out.lambda_star = std::clamp(r.z[0], 0.0, 1.0);
    if (out.lambda_star >= 1.0 - kInteriorTol) {
        out.classification = PointClass::Interior;
        return out;
    }
    out.classification = PointClass::Exterior;
    Vec b(w_in.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = w_in[i] + out.lambda_star * (w_gp[i] - w_in[i]);
    out.boundary_point = std::move(b);
    return out;
}

Vec nbpg(const LinearRegion& region, std::span<const double> w_b, const std::vector<Vec>& prior,
         std::size_t axis, Sense sense, lp::SolveCounter* counter)
{
    check_dim(region, w_b, "w_b");
    const std::size_t nw = region.n_w, nx = region.n_x;
    if (axis >= nw) throw ValidationError("nbpg: axis out of range");

    // Variables: w+ (nw), x+ (nx), x- (nx).
    lp::LpProblem p(nw + 2 * nx);
    p.objective[axis] = sense == Sense::Minimize ? 1.0 : -1.0;

    AffineW plus{Vec(nw, 0.0), Mat(nw, p.num_vars())};
    AffineW mirror{Vec(nw), Mat(nw, p.num_vars())};
    for (std::size_t i = 0; i < nw; ++i) {
        plus.map(i, i) = 1.0;
        mirror.base[i] = 2.0 * w_b[i];
        mirror.map(i, i) = -1.0;
    }
    append_region_rows(p, region, plus, nw);
    append_region_rows(p, region, mirror, nw + nx);

    for (const Vec& q : prior) {
        check_dim(region, q, "prior point");
        Vec row(p.num_vars(), 0.0);
        double rhs = 0.0;
        for (std::size_t i = 0; i < nw; ++i) {
            row[i] = q[i] - w_b[i];
            rhs += row[i] * w_b[i];
        }
        p.add_eq(row, rhs);
    }

    const lp::LpResult r = lp::solve(p, {.counter = counter});
    if (r.status == lp::LpStatus::Infeasible) throw ModelInfeasible("nbpg: model infeasible");
    if (r.status == lp::LpStatus::Unbounded) {
        throw UnboundedRegion("nbpg: the facet is unbounded along axis " + std::to_string(axis));
    }
    return Vec(r.z.begin(), r.z.begin() + static_cast<std::ptrdiff_t>(nw));
}

std::vector<Vec> obg(const LinearRegion& region, std::span<const double> w_b, double eps,
                     lp::SolveCounter* counter)
{
    const std::size_t n = region.n_w;
    std::vector<Vec> points;
    auto displacement = [&](const Vec& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (q[i] - w_b[i]) * (q[i] - w_b[i]);
        return std::sqrt(s);
    };

    for (std::size_t step = 0; step + 1 < n; ++step) {
        bool moved = false;
        for (std::size_t k = 0; k < n && !moved; ++k) {
            const std::size_t axis = (step + k) % n;
            for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
                Vec q;
                try {
                    q = nbpg(region, w_b, points, axis, sense, counter);
                } catch (const ModelInfeasible&) {
                    throw BadBoundaryPoint(Vec(w_b.begin(), w_b.end()), axis);
                }
                if (displacement(q) > eps) {
                    points.push_back(std::move(q));
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) throw BadBoundaryPoint(Vec(w_b.begin(), w_b.end()), step);
    }
    return points;
}

Hyperplane fit_hyperplane(std::span<const double> w_b, const std::vector<Vec>& new_points,
                          std::span<const double> interior)
{
    const std::size_t n = w_b.size();
    if (new_points.size() + 1 != n) {
        throw ValidationError("fit_hyperplane needs " + std::to_string(n - 1) + " new points");
    }
    Mat m(0, n + 1);
    auto push = [&](std::span<const double> p) {
        auto row = m.append_zero_row();
        std::copy(p.begin(), p.end(), row.begin());
        row[n] = 1.0;
    };
    push(w_b);
    for (const Vec& p : new_points) push(p);
    const Vec v = nullspace_1d(m);
    return orient_and_normalize(Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)), v[n],
                                interior);
}

Vec depa(const LinearRegion& region, std::span<const double> w_ex_bad,
         const std::optional<Vec>& w_b_pre, std::span<const double> w_max, std::uint64_t seed,
         lp::SolveCounter* counter)
{
    check_dim(region, w_ex_bad, "w_ex_bad");
    const std::size_t n = region.n_w;

    if (w_b_pre) {
        check_dim(region, *w_b_pre, "w_b_pre");
        const lp::LpResult r = max_along_segment(region, *w_b_pre, w_ex_bad, counter);
        const double lam = r.status == lp::LpStatus::Optimal ? std::clamp(r.z[0], 0.0, 1.0) : 0.0;
        Vec out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double seg = (*w_b_pre)[i] + lam * (w_ex_bad[i] - (*w_b_pre)[i]);
            out[i] = 0.5 * (seg + w_ex_bad[i]);
        }
        return out;
    }

    if (w_max.size() != n) throw ValidationError("depa: w_max dimension mismatch");
    std::mt19937_64 rng(seed);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Vec out(w_ex_bad.begin(), w_ex_bad.end());
    for (std::size_t i = 0; i < n; ++i) {
        const double step = 1e-3 * w_max[i] * (0.5 + 0.5 * unit());
        const double sign = unit() < 0.5 ? -1.0 : 1.0;
        double v = out[i] + sign * step;
        if (v < 0.0 || v > w_max[i]) v = out[i] - sign * step;
        out[i] = std::clamp(v, 0.0, w_max[i]);
    }
    return out;
}

}  // namespace polyproj
