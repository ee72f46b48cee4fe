#include <algorithm>
#include <cmath>
#include <limits>

#include "polyproj/errors.hpp"
#include "polyproj/verify.hpp"

namespace polyproj {

namespace {

constexpr std::size_t kMaxX = 10;
constexpr std::size_t kMaxRows = 60;
constexpr double kZero = 1e-11;
constexpr double kRedundantTol = 1e-9;

struct Row
{
    Vec a;
    double b = 0.0;
};

class Eliminator
{
    public:
        Eliminator(std::size_t n_w, std::size_t n_cols) : n_w_(n_w), n_cols_(n_cols)
        {
            for (std::size_t j = n_w; j < n_cols; ++j) live_.push_back(j);
        }

        std::vector<Row> rows;

        void pivot_equalities(std::vector<Row> eqs)
        {
            for (std::size_t e = 0; e < eqs.size(); ++e) {
                Row& eq = eqs[e];
                std::size_t best = n_cols_;
                double mag = 0.0;
                for (std::size_t j : live_) {
                    if (std::abs(eq.a[j]) > mag) {
                        mag = std::abs(eq.a[j]);
                        best = j;
                    }
                }
                const double scale = std::max(1.0, row_max(eq.a));
                if (best == n_cols_ || mag <= 1e-9 * scale) {
                    // No x left in this row: a constraint on w alone.
                    if (row_max(eq.a) <= kZero) {
                        if (std::abs(eq.b) > 1e-9) throw ValidationError("fme_project: region is empty");
                        continue;
                    }
                    rows.push_back(eq);
                    Row neg = eq;
                    for (double& v : neg.a) v = -v;
                    neg.b = -neg.b;
                    rows.push_back(std::move(neg));
                    continue;
                }
                auto substitute = [&](Row& r) {
                    const double f = r.a[best] / eq.a[best];
                    if (f == 0.0) return;
                    for (std::size_t j = 0; j < n_cols_; ++j) r.a[j] -= f * eq.a[j];
                    r.b -= f * eq.b;
                    r.a[best] = 0.0;
                };
                for (std::size_t k = e + 1; k < eqs.size(); ++k) substitute(eqs[k]);
                for (Row& r : rows) substitute(r);
                std::erase(live_, best);
            }
            cleanup();
        }

        void eliminate_all()
        {
            while (!live_.empty()) {
                // Fewest generated rows first; ties go to the lowest column.
                std::size_t pick = live_.front();
                long long best_cost = std::numeric_limits<long long>::max();
                for (std::size_t j : live_) {
                    long long pos = 0, neg = 0;
                    for (const Row& r : rows) {
                        if (r.a[j] > kZero) ++pos;
                        else if (r.a[j] < -kZero) ++neg;
                    }
                    const long long cost = pos * neg - pos - neg;
                    if (cost < best_cost) {
                        best_cost = cost;
                        pick = j;
                    }
                }
                eliminate(pick);
                std::erase(live_, pick);
                cleanup();
            }
        }

    private:
        std::size_t n_w_;
        std::size_t n_cols_;
        std::vector<std::size_t> live_;

        static double row_max(const Vec& a)
        {
            double m = 0.0;
            for (double v : a) m = std::max(m, std::abs(v));
            return m;
        }

        void eliminate(std::size_t j)
        {
            std::vector<Row> pos, neg, next;
            for (Row& r : rows) {
                if (r.a[j] > kZero) pos.push_back(std::move(r));
                else if (r.a[j] < -kZero) neg.push_back(std::move(r));
                else {
                    r.a[j] = 0.0;
                    next.push_back(std::move(r));
                }
            }
            for (const Row& p : pos) {
                for (const Row& n : neg) {
                    const double fp = 1.0 / p.a[j], fn = -1.0 / n.a[j];
                    Row c;
                    c.a.resize(n_cols_);
                    for (std::size_t k = 0; k < n_cols_; ++k) c.a[k] = fp * p.a[k] + fn * n.a[k];
                    c.a[j] = 0.0;
                    c.b = fp * p.b + fn * n.b;
                    next.push_back(std::move(c));
                }
            }
            rows = std::move(next);
        }

        void cleanup()
        {
            std::vector<Row> kept;
            for (Row& r : rows) {
                const double m = row_max(r.a);
                if (m <= kZero) {
                    if (r.b < -1e-9) throw ValidationError("fme_project: region is empty");
                    continue;
                }
                for (double& v : r.a) v /= m;
                r.b /= m;
                bool dup = false;
                for (Row& k : kept) {
                    double d = 0.0;
                    for (std::size_t c = 0; c < n_cols_; ++c) d = std::max(d, std::abs(k.a[c] - r.a[c]));
                    if (d <= 1e-10) {
                        k.b = std::min(k.b, r.b);
                        dup = true;
                        break;
                    }
                }
                if (!dup) kept.push_back(std::move(r));
            }
            rows = std::move(kept);
            remove_redundant();
        }

        // A row is redundant when the others already bound it.
        void remove_redundant()
        {
            std::vector<std::size_t> cols(n_w_);
            for (std::size_t j = 0; j < n_w_; ++j) cols[j] = j;
            cols.insert(cols.end(), live_.begin(), live_.end());

            std::vector<bool> active(rows.size(), true);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                lp::LpProblem p(cols.size());
                for (std::size_t c = 0; c < cols.size(); ++c) p.objective[c] = -rows[i].a[cols[c]];
                Vec sub(cols.size());
                for (std::size_t k = 0; k < rows.size(); ++k) {
                    if (k == i || !active[k]) continue;
                    for (std::size_t c = 0; c < cols.size(); ++c) sub[c] = rows[k].a[cols[c]];
                    p.add_le(sub, rows[k].b);
                }
                const lp::LpResult r = lp::solve(p);
                if (r.status == lp::LpStatus::Infeasible) throw ValidationError("fme_project: region is empty");
                if (r.status == lp::LpStatus::Optimal && -r.objective_value <= rows[i].b + kRedundantTol) {
                    active[i] = false;
                }
            }
            std::vector<Row> kept;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (active[i]) kept.push_back(std::move(rows[i]));
            }
            rows = std::move(kept);
        }
};

}  // namespace

Polytope fme_project(const LinearRegion& region, std::span<const double> box)
{
    region.check_shape();
    if (region.n_x > kMaxX || region.a_in.rows() > kMaxRows) {
        throw SizeGuardExceeded("fme_project: region has " + std::to_string(region.n_x) + " x variables and " +
                                std::to_string(region.a_in.rows()) + " inequalities (limits " +
                                std::to_string(kMaxX) + " and " + std::to_string(kMaxRows) + ")");
    }
    if (!box.empty() && box.size() != region.n_w) throw ValidationError("fme_project: box dimension mismatch");

    const std::size_t nw = region.n_w, nc = region.num_cols();
    Eliminator el(nw, nc);
    for (std::size_t i = 0; i < region.a_in.rows(); ++i) {
        auto r = region.a_in.row(i);
        el.rows.push_back({Vec(r.begin(), r.end()), region.b_in[i]});
    }
    for (std::size_t i = 0; i < box.size(); ++i) {
        Row up{Vec(nc, 0.0), box[i]};
        up.a[i] = 1.0;
        Row dn{Vec(nc, 0.0), 0.0};
        dn.a[i] = -1.0;
        el.rows.push_back(std::move(up));
        el.rows.push_back(std::move(dn));
    }
    std::vector<Row> eqs;
    for (std::size_t i = 0; i < region.a_eq.rows(); ++i) {
        auto r = region.a_eq.row(i);
        eqs.push_back({Vec(r.begin(), r.end()), region.b_eq[i]});
    }
    el.pivot_equalities(std::move(eqs));
    el.eliminate_all();

    Polytope out;
    if (!box.empty()) {
        out = Polytope::box(Vec(box.begin(), box.end()));
    } else {
        out.dimension = nw;
    }
    for (const Row& r : el.rows) {
        Vec n(r.a.begin(), r.a.begin() + static_cast<std::ptrdiff_t>(nw));
        const double len = norm2(n);
        for (double& v : n) v /= len;
        Hyperplane h{std::move(n), -r.b / len};
        const bool known = std::any_of(out.facets.begin(), out.facets.end(),
                                       [&](const Hyperplane& f) { return same_hyperplane(f, h); });
        if (!known) out.add(std::move(h), Provenance::Discovered);
    }
    return out;
}

}  // namespace polyproj
