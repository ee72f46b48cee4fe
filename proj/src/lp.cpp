#include "polyproj/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "polyproj/errors.hpp"

namespace polyproj::lp {

namespace {

constexpr double kCostTol = 1e-9;     // reduced-cost optimality threshold
constexpr double kPivotTol = 1e-9;    // smallest usable pivot element
constexpr double kPhase1Tol = 1e-8;   // residual infeasibility accepted after phase 1
constexpr double kZeroRhs = 1e-12;
constexpr std::size_t kBlandAfter = 500;

enum class ColKind { Fixed, Lower, Upper, Free };

struct ColMap
{
    ColKind kind;
    double shift;     // lo for Lower/Fixed, hi for Upper
    std::size_t y;    // first structural column (Free uses y and y + 1)
};

struct StdRow
{
    std::vector<double> a;
    double rhs;
    bool eq;
};

/**
 * Dense tableau. Rows [0, m) are constraints, row m is the phase-1
 * objective and row m + 1 the phase-2 objective. Objective rows hold reduced
 * costs; their rhs entry holds minus the current objective value.
 */
class Tableau
{
    public:
        Tableau(std::size_t m, std::size_t n_struct, std::size_t n_slack, std::size_t n_art)
            : m_(m), n_struct_(n_struct), n_slack_(n_slack), n_art_(n_art),
              width_(n_struct + n_slack + n_art + 1), t_((m + 2) * width_, 0.0),
              basis_(m, 0), art_active_(n_art, true) {}

        double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
        double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
        double& rhs(std::size_t r) { return t_[r * width_ + width_ - 1]; }
        double rhs(std::size_t r) const { return t_[r * width_ + width_ - 1]; }

        std::size_t m() const { return m_; }
        std::size_t width() const { return width_; }
        std::size_t first_art() const { return n_struct_ + n_slack_; }
        bool is_art(std::size_t c) const { return c >= first_art() && c < width_ - 1; }
        std::vector<std::size_t>& basis() { return basis_; }
        const std::vector<std::size_t>& basis() const { return basis_; }

        bool eligible(std::size_t c, bool phase1) const
        {
            if (!is_art(c)) return true;
            return phase1 && art_active_[c - first_art()];
        }

        void pivot(std::size_t r, std::size_t c)
        {
            const std::size_t leaving = basis_[r];
            double* prow = &t_[r * width_];
            const double inv = 1.0 / prow[c];
            nz_.clear();
            for (std::size_t j = 0; j < width_; ++j) {
                if (prow[j] != 0.0) {
                    prow[j] *= inv;
                    nz_.push_back(j);
                }
            }
            prow[c] = 1.0;
            for (std::size_t i = 0; i < m_ + 2; ++i) {
                if (i == r) continue;
                double* row = &t_[i * width_];
                const double f = row[c];
                if (f == 0.0) continue;
                for (std::size_t j : nz_) row[j] -= f * prow[j];
                row[c] = 0.0;
                if (i < m_) {
                    double& b = row[width_ - 1];
                    if (std::abs(b) < kZeroRhs) b = 0.0;
                }
            }
            basis_[r] = c;
            if (is_art(leaving)) art_active_[leaving - first_art()] = false;
        }

        void dump(std::ostream& os) const
        {
            os << "basis";
            for (std::size_t j = 0; j + 1 < width_; ++j) os << "\tc" << j;
            os << "\trhs\n";
            for (std::size_t i = 0; i < m_ + 2; ++i) {
                if (i < m_) {
                    os << basis_[i];
                } else {
                    os << (i == m_ ? "obj1" : "obj2");
                }
                for (std::size_t j = 0; j < width_; ++j) os << '\t' << at(i, j);
                os << '\n';
            }
        }

    private:
        std::size_t m_, n_struct_, n_slack_, n_art_, width_;
        std::vector<double> t_;
        std::vector<std::size_t> basis_;
        std::vector<bool> art_active_;
        std::vector<std::size_t> nz_;
};

enum class PhaseOutcome { Optimal, Unbounded };

class Simplex
{
    public:
        Simplex(Tableau& tab, std::size_t iteration_cap) : tab_(tab), cap_(iteration_cap) {}

        PhaseOutcome run(bool phase1)
        {
            const std::size_t obj = phase1 ? tab_.m() : tab_.m() + 1;
            std::size_t degenerate = 0;
            bool bland = false;
            while (true) {
                const std::size_t e = entering(obj, phase1, bland);
                if (e == kNone) return PhaseOutcome::Optimal;
                const auto [r, step] = leaving(e, bland);
                if (r == kNone) return PhaseOutcome::Unbounded;
                if (step <= kZeroRhs && ++degenerate >= kBlandAfter) bland = true;
                tab_.pivot(r, e);
                if (++iterations_ > cap_) {
                    throw NumericalFailure("simplex iteration cap " + std::to_string(cap_) +
                                           " exceeded");
                }
            }
        }

        std::size_t iterations() const { return iterations_; }

    private:
        static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

        std::size_t entering(std::size_t obj, bool phase1, bool bland) const
        {
            std::size_t best = kNone;
            double best_val = -kCostTol;
            for (std::size_t j = 0; j + 1 < tab_.width(); ++j) {
                const double d = tab_.at(obj, j);
                if (d >= best_val || !tab_.eligible(j, phase1)) continue;
                best = j;
                if (bland) break;
                best_val = d;
            }
            return best;
        }

        std::pair<std::size_t, double> leaving(std::size_t e, bool bland) const
        {
            std::size_t best = kNone;
            double best_ratio = 0.0;
            double best_piv = 0.0;
            for (std::size_t i = 0; i < tab_.m(); ++i) {
                const double a = tab_.at(i, e);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(tab_.rhs(i), 0.0) / a;
                if (best == kNone || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
                    best = i;
                    best_ratio = ratio;
                    best_piv = a;
                    continue;
                }
                if (ratio > best_ratio + 1e-12 * (1.0 + best_ratio)) continue;
                // tie
                const bool take = bland ? tab_.basis()[i] < tab_.basis()[best]
                                        : (a > best_piv || (a == best_piv &&
                                                            tab_.basis()[i] < tab_.basis()[best]));
                if (take) {
                    best = i;
                    best_ratio = std::min(best_ratio, ratio);
                    best_piv = a;
                }
            }
            return {best, best_ratio};
        }

        Tableau& tab_;
        std::size_t cap_;
        std::size_t iterations_ = 0;
};

void append_std_row(std::vector<StdRow>& rows, std::span<const double> a, double rhs, bool eq,
                    const std::vector<ColMap>& cols, std::size_t n_struct)
{
    StdRow row{std::vector<double>(n_struct, 0.0), rhs, eq};
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double v = a[j];
        if (v == 0.0) continue;
        const ColMap& cm = cols[j];
        switch (cm.kind) {
            case ColKind::Fixed: row.rhs -= v * cm.shift; break;
            case ColKind::Lower:
                row.a[cm.y] += v;
                row.rhs -= v * cm.shift;
                break;
            case ColKind::Upper:
                row.a[cm.y] -= v;
                row.rhs -= v * cm.shift;
                break;
            case ColKind::Free:
                row.a[cm.y] += v;
                row.a[cm.y + 1] -= v;
                break;
        }
    }
    rows.push_back(std::move(row));
}

}  // namespace

LpProblem::LpProblem(std::size_t num_vars)
    : objective(num_vars, 0.0), a_eq(0, num_vars), a_in(0, num_vars), lo(num_vars, -kInf),
      hi(num_vars, kInf) {}

void LpProblem::add_eq(std::span<const double> row, double rhs)
{
    a_eq.append_row(row);
    b_eq.push_back(rhs);
}

void LpProblem::add_le(std::span<const double> row, double rhs)
{
    a_in.append_row(row);
    b_in.push_back(rhs);
}

void LpProblem::add_ge(std::span<const double> row, double rhs)
{
    Vec neg(row.begin(), row.end());
    for (double& v : neg) v = -v;
    add_le(neg, -rhs);
}

std::string_view to_string(LpStatus s)
{
    switch (s) {
        case LpStatus::Optimal: return "Optimal";
        case LpStatus::Infeasible: return "Infeasible";
        case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

LpResult solve(const LpProblem& p, const LpOptions& opts)
{
    const std::size_t n = p.num_vars();
    if (p.lo.size() != n || p.hi.size() != n || (p.a_eq.rows() && p.a_eq.cols() != n) ||
        (p.a_in.rows() && p.a_in.cols() != n) || p.b_eq.size() != p.a_eq.rows() ||
        p.b_in.size() != p.a_in.rows()) {
        throw Error("lp::solve: inconsistent problem dimensions");
    }
    if (opts.counter) ++opts.counter->solves;

    LpResult result;

    // Column substitution.
    std::vector<ColMap> cols(n);
    std::size_t n_struct = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = p.lo[j], hi = p.hi[j];
        if (lo > hi || lo == kInf || hi == -kInf) return result;  // Infeasible
        if (lo == hi) {
            cols[j] = {ColKind::Fixed, lo, 0};
        } else if (std::isfinite(lo)) {
            cols[j] = {ColKind::Lower, lo, n_struct++};
        } else if (std::isfinite(hi)) {
            cols[j] = {ColKind::Upper, hi, n_struct++};
        } else {
            cols[j] = {ColKind::Free, 0.0, n_struct};
            n_struct += 2;
        }
    }

    std::vector<StdRow> rows;
    rows.reserve(p.a_eq.rows() + p.a_in.rows() + n);
    for (std::size_t i = 0; i < p.a_eq.rows(); ++i) {
        append_std_row(rows, p.a_eq.row(i), p.b_eq[i], true, cols, n_struct);
    }
    for (std::size_t i = 0; i < p.a_in.rows(); ++i) {
        append_std_row(rows, p.a_in.row(i), p.b_in[i], false, cols, n_struct);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (cols[j].kind == ColKind::Lower && std::isfinite(p.hi[j])) {
            StdRow row{std::vector<double>(n_struct, 0.0), p.hi[j] - p.lo[j], false};
            row.a[cols[j].y] = 1.0;
            rows.push_back(std::move(row));
        }
    }

    // Equilibrate, drop empty rows, orient to rhs >= 0.
    std::vector<StdRow> kept;
    kept.reserve(rows.size());
    for (StdRow& r : rows) {
        double scale = 0.0;
        for (double v : r.a) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) {
            const bool ok = r.eq ? std::abs(r.rhs) <= kPhase1Tol : r.rhs >= -kPhase1Tol;
            if (!ok) return result;
            continue;
        }
        for (double& v : r.a) v /= scale;
        r.rhs /= scale;
        kept.push_back(std::move(r));
    }

    const std::size_t m = kept.size();
    std::size_t n_slack = 0, n_art = 0;
    for (const StdRow& r : kept) {
        if (!r.eq) ++n_slack;
        if (r.eq || r.rhs < 0.0) ++n_art;
    }

    Tableau tab(m, n_struct, n_slack, n_art);
    std::size_t slack = n_struct, art = n_struct + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
        const StdRow& r = kept[i];
        const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_struct; ++j) tab.at(i, j) = sign * r.a[j];
        tab.rhs(i) = sign * r.rhs;
        if (!r.eq) {
            tab.at(i, slack) = sign;
            if (sign > 0.0) tab.basis()[i] = slack;
            ++slack;
        }
        if (r.eq || sign < 0.0) {
            tab.at(i, art) = 1.0;
            tab.basis()[i] = art;
            ++art;
        }
    }

    // Phase-1 reduced costs: minus the sum of artificial rows.
    const std::size_t obj1 = m, obj2 = m + 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (!tab.is_art(tab.basis()[i])) continue;
        for (std::size_t j = 0; j < tab.width(); ++j) {
            if (!tab.is_art(j)) tab.at(obj1, j) -= tab.at(i, j);
        }
    }
    // Phase-2 costs in the substituted space; basic slacks and artificials cost nothing.
    double constant = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double c = p.objective[j];
        if (c == 0.0) continue;
        const ColMap& cm = cols[j];
        switch (cm.kind) {
            case ColKind::Fixed: constant += c * cm.shift; break;
            case ColKind::Lower:
                tab.at(obj2, cm.y) += c;
                constant += c * cm.shift;
                break;
            case ColKind::Upper:
                tab.at(obj2, cm.y) -= c;
                constant += c * cm.shift;
                break;
            case ColKind::Free:
                tab.at(obj2, cm.y) += c;
                tab.at(obj2, cm.y + 1) -= c;
                break;
        }
    }

    Simplex simplex(tab, 100 * (m + tab.width()));
    simplex.run(true);
    if (-tab.rhs(obj1) > kPhase1Tol) {
        result.iterations = simplex.iterations();
        if (opts.tableau_dump) tab.dump(*opts.tableau_dump);
        return result;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (!tab.is_art(tab.basis()[i])) continue;
        std::size_t best = tab.width();
        double best_abs = kPivotTol;
        for (std::size_t j = 0; j < tab.first_art(); ++j) {
            if (std::abs(tab.at(i, j)) > best_abs) {
                best_abs = std::abs(tab.at(i, j));
                best = j;
            }
        }
        if (best != tab.width()) tab.pivot(i, best);
    }

    const PhaseOutcome out = simplex.run(false);
    result.iterations = simplex.iterations();
    if (opts.tableau_dump) tab.dump(*opts.tableau_dump);
    if (out == PhaseOutcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    std::vector<double> y(n_struct, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = tab.basis()[i];
        if (b < n_struct) y[b] = std::max(tab.rhs(i), 0.0);
    }
    result.z.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const ColMap& cm = cols[j];
        switch (cm.kind) {
            case ColKind::Fixed: result.z[j] = cm.shift; break;
            case ColKind::Lower: result.z[j] = cm.shift + y[cm.y]; break;
            case ColKind::Upper: result.z[j] = cm.shift - y[cm.y]; break;
            case ColKind::Free: result.z[j] = y[cm.y] - y[cm.y + 1]; break;
        }
    }
    result.status = LpStatus::Optimal;
    result.objective_value = constant - tab.rhs(obj2);
    return result;
}

bool feasible(const LpProblem& p, const LpOptions& opts)
{
    LpProblem q = p;
    std::fill(q.objective.begin(), q.objective.end(), 0.0);
    return solve(q, opts).status != LpStatus::Infeasible;
}

}  // namespace polyproj::lp
