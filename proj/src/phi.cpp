#include <cmath>
#include <deque>
#include <set>

#include "polyproj/errors.hpp"
#include "polyproj/projector.hpp"
#include "subsets.hpp"

namespace polyproj {

void PhgConfig::validate() const
{
    if (!(phi_deg >= 0.0) || !std::isfinite(phi_deg)) throw ValidationError("phi_deg must be >= 0");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be > 0");
    if (max_iterations == 0) throw ValidationError("max_iterations must be positive");
}

namespace {

constexpr double kFacetTol = 1e-7;
constexpr double kKeyGrid = 1e-7;

using Key = std::vector<long long>;

Key key_of(const Vec& w)
{
    Key k(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) k[i] = std::llround(w[i] / kKeyGrid);
    return k;
}

double distance(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

class PhiDriver
{
    public:
        PhiDriver(const LinearRegion& region, std::span<const double> w_max, const PhgConfig& cfg)
            : region_(region), w_max_(w_max.begin(), w_max.end()), cfg_(cfg),
              w_in_(region.n_w, 0.0)
        {
            result_.polytope = Polytope::box(w_max_);
        }

        PhiResult run()
        {
            enqueue(w_max_);
            while (true) {
                if (queue_.empty() && !sweep()) break;
                if (result_.stats.iterations >= cfg_.max_iterations) {
                    result_.iteration_cap_reached = true;
                    break;
                }
                Vec w_ex = std::move(queue_.front());
                queue_.pop_front();
                ++result_.stats.iterations;
                process(w_ex);
            }
            result_.stats.lp_solves = counter_.solves;
            return std::move(result_);
        }

    private:
        struct Fitted
        {
            Hyperplane h;
            Vec boundary;
            std::vector<Vec> points;
        };

        const LinearRegion& region_;
        Vec w_max_;
        PhgConfig cfg_;
        Vec w_in_;
        PhiResult result_;
        std::deque<Vec> queue_;
        std::set<Key> seen_;
        std::optional<Vec> last_boundary_;
        lp::SolveCounter counter_;

        bool enqueue(const Vec& w)
        {
            if (!seen_.insert(key_of(w)).second) return false;
            queue_.push_back(w);
            ++result_.stats.candidates_enqueued;
            return true;
        }

        // Boundary point, OBG and fit for one exterior target. Empty on a bad
        // boundary point or a failed certification.
        std::optional<Fitted> try_fit(const Vec& wb)
        {
            Fitted f;
            f.boundary = wb;
            try {
                f.points = obg(region_, wb, cfg_.eps, &counter_);
                f.h = fit_hyperplane(wb, f.points, w_in_);
            } catch (const BadBoundaryPoint&) {
                ++result_.stats.bad_boundary_points;
                return std::nullopt;
            } catch (const RankError&) {
                ++result_.stats.bad_boundary_points;
                return std::nullopt;
            } catch (const DegenerateError&) {
                ++result_.stats.bad_boundary_points;
                return std::nullopt;
            }
            // The facet must not cut off any point of the projection.
            const auto top = support_value(region_, f.h.normal, &counter_);
            if (!top || *top + f.h.offset > kFacetTol) {
                ++result_.stats.certification_failures;
                return std::nullopt;
            }
            return f;
        }

        void process(const Vec& w_ex)
        {
            PhiStats& st = result_.stats;
            if (result_.polytope.max_violation(w_ex) > kFacetTol) {
                ++st.candidates_pruned;
                return;
            }

            Vec target = w_ex;
            bool adjusted = false;
            std::optional<Vec> last_bad;
            for (std::size_t attempt = 0;; ++attempt) {
                std::optional<Fitted> fitted;
                bool jitter_next = false;

                const BpsOutcome out = bps(region_, w_in_, target, &counter_);
                if (out.classification == PointClass::Interior) {
                    if (!adjusted) {
                        ++st.interior_pops;
                        return;
                    }
                    jitter_next = true;
                } else {
                    const Vec& wb = *out.boundary_point;
                    if (distance(wb, target) <= kFacetTol) {
                        // Numerically on the boundary already; nothing to separate.
                        ++st.interior_pops;
                        if (!adjusted) return;
                        jitter_next = true;
                    } else {
                        fitted = try_fit(wb);
                        if (!fitted) {
                            jitter_next = last_bad && distance(*last_bad, wb) <= 1e-9;
                            last_bad = wb;
                        }
                    }
                }

                if (fitted) {
                    accept(std::move(*fitted), w_ex, adjusted);
                    return;
                }

                if (attempt >= cfg_.depa_retry_cap) {
                    std::string where;
                    for (double v : w_ex) where += (where.empty() ? "" : ", ") + std::to_string(v);
                    throw DepaExhausted("DEPA retry cap reached for exterior point (" + where + ")");
                }
                ++st.depa_invocations;
                const std::uint64_t seed = cfg_.seed + st.depa_invocations;
                if (jitter_next || !last_boundary_) {
                    target = depa(region_, w_ex, std::nullopt, w_max_, seed, &counter_);
                } else {
                    target = depa(region_, target, last_boundary_, w_max_, seed, &counter_);
                }
                adjusted = true;
            }
        }

        void accept(Fitted f, const Vec& w_ex, bool adjusted)
        {
            PhiStats& st = result_.stats;
            Polytope& poly = result_.polytope;
            if (!angle_accept(f.h, poly, cfg_.phi_deg)) {
                ++st.discarded_by_angle;
                return;
            }
            poly.add(f.h, Provenance::Discovered);
            const std::size_t idx = poly.facets.size() - 1;
            last_boundary_ = f.boundary;
            result_.traces.push_back({idx, std::move(f.boundary), std::move(f.points)});

            // Queued points outside the new facet can no longer be exterior candidates.
            const Hyperplane& h = poly.facets[idx];
            for (auto it = queue_.begin(); it != queue_.end();) {
                if (h.eval(*it) > kFacetTol) {
                    it = queue_.erase(it);
                    ++st.candidates_pruned;
                } else {
                    ++it;
                }
            }

            std::vector<std::size_t> adj = adjacent_facets(poly, h, &counter_);
            std::erase(adj, idx);
            for (Vec& c : candidate_exterior_points(region_, poly, h, adj, nullptr, &counter_)) {
                enqueue(c);
            }

            if (adjusted && poly.max_violation(w_ex) <= kFacetTol && !membership(region_, w_ex, &counter_)) {
                queue_.push_back(w_ex);
                ++st.requeued;
            }
        }

        // Exterior vertices of the current polytope not seen before.
        bool sweep()
        {
            if (!cfg_.vertex_sweep) return false;
            PhiStats& st = result_.stats;
            const Polytope& poly = result_.polytope;
            const std::size_t n = poly.dimension;
            if (detail::choose_capped(poly.facets.size(), n, cfg_.sweep_subset_limit + 1) >
                cfg_.sweep_subset_limit) {
                st.sweep_skipped = true;
                return false;
            }
            ++st.sweep_rounds;
            std::set<Key> local;
            bool any = false;
            detail::for_each_subset(poly.facets.size(), n, [&](const std::vector<std::size_t>& sub) {
                Mat a(0, n);
                Vec b;
                for (std::size_t k : sub) {
                    a.append_row(poly.facets[k].normal);
                    b.push_back(-poly.facets[k].offset);
                }
                Vec w;
                try {
                    w = solve_square(std::move(a), std::move(b));
                } catch (const SingularError&) {
                    return;
                }
                if (poly.max_violation(w) > kFacetTol) return;
                const Key k = key_of(w);
                if (seen_.count(k) || !local.insert(k).second) return;
                if (membership(region_, w, &counter_)) return;
                if (enqueue(w)) {
                    ++st.sweep_candidates;
                    any = true;
                }
            });
            return any;
        }
};

}  // namespace

PhiResult phi_run(const LinearRegion& region, std::span<const double> w_max, const PhgConfig& config)
{
    config.validate();
    region.check_shape();
    if (w_max.size() != region.n_w) {
        throw ValidationError("w_max has " + std::to_string(w_max.size()) + " entries, region has " +
                              std::to_string(region.n_w));
    }
    for (double v : w_max) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("w_max must be positive and finite");
    }
    PhiDriver driver(region, w_max, config);
    return driver.run();
}

}  // namespace polyproj
