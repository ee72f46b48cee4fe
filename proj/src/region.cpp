#include "polyproj/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "polyproj/errors.hpp"

namespace polyproj {

void validate(const NetworkCase& c, const RegSpec& reg)
{
    if (reg.nodes.empty()) throw ValidationError("REG placement is empty");
    if (reg.w_max.size() != reg.nodes.size()) {
        throw ValidationError("REG w_max has " + std::to_string(reg.w_max.size()) +
                              " entries for " + std::to_string(reg.nodes.size()) + " nodes");
    }
    std::set<int> seen;
    for (std::size_t i = 0; i < reg.nodes.size(); ++i) {
        const int id = reg.nodes[i];
        if (!seen.insert(id).second) {
            throw ValidationError("REG node " + std::to_string(id) + " listed twice");
        }
        if (!c.find_bus(id)) throw ValidationError("REG node " + std::to_string(id) + " is not a bus");
        if (!(reg.w_max[i] > 0) || !std::isfinite(reg.w_max[i])) {
            throw ValidationError("REG w_max must be positive and finite at node " +
                                  std::to_string(id));
        }
    }
}

std::size_t LinearRegion::column(std::string_view name) const
{
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] == name) return j;
    }
    throw ValidationError("unknown region variable \"" + std::string(name) + "\"");
}

void LinearRegion::check_shape() const
{
    const std::size_t n = num_cols();
    if (n_w == 0) throw ValidationError("region has no projected coordinates");
    if (a_eq.cols() != n && !(a_eq.rows() == 0 && a_eq.cols() == 0)) {
        throw ValidationError("equality block has " + std::to_string(a_eq.cols()) +
                              " columns, expected " + std::to_string(n));
    }
    if (a_in.cols() != n && !(a_in.rows() == 0 && a_in.cols() == 0)) {
        throw ValidationError("inequality block has " + std::to_string(a_in.cols()) +
                              " columns, expected " + std::to_string(n));
    }
    if (a_eq.rows() != b_eq.size()) throw ValidationError("equality rhs length mismatch");
    if (a_in.rows() != b_in.size()) throw ValidationError("inequality rhs length mismatch");
    if (columns.size() != n) throw ValidationError("column name count mismatch");
    if (!w_max.empty() && w_max.size() != n_w) throw ValidationError("w_max length mismatch");
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(a_eq.data()) || !finite(b_eq) || !finite(a_in.data()) || !finite(b_in)) {
        throw ValidationError("region contains non-finite coefficients");
    }
}

LinearRegion make_region(std::size_t n_w, Mat a_eq, Vec b_eq, Mat a_in, Vec b_in)
{
    const std::size_t n = std::max(a_eq.cols(), a_in.cols());
    if (n_w > n) throw ValidationError("n_w exceeds the column count");
    LinearRegion r;
    r.n_w = n_w;
    r.n_x = n - n_w;
    if (a_eq.cols() == 0) a_eq.reset_cols(n);
    if (a_in.cols() == 0) a_in.reset_cols(n);
    r.a_eq = std::move(a_eq);
    r.b_eq = std::move(b_eq);
    r.a_in = std::move(a_in);
    r.b_in = std::move(b_in);
    for (std::size_t j = 0; j < n_w; ++j) r.columns.push_back("w" + std::to_string(j + 1));
    for (std::size_t j = 0; j < r.n_x; ++j) r.columns.push_back("x" + std::to_string(j + 1));
    r.check_shape();
    return r;
}

namespace {

// Series admittance y = 1 / (r + j x).
struct Admittance
{
    double g;
    double b;
};

Admittance series_admittance(const Branch& br)
{
    const double den = br.r * br.r + br.x_series * br.x_series;
    return {br.r / den, -br.x_series / den};
}

}  // namespace

LinearRegion build_linear_region(const NetworkCase& c, const RegSpec& reg,
                                 const RegionOptions& opts)
{
    validate(c);
    validate(c, reg);

    std::vector<const Bus*> buses;
    for (const Bus& b : c.buses) buses.push_back(&b);
    std::sort(buses.begin(), buses.end(), [](const Bus* a, const Bus* b) { return a->id < b->id; });
    std::map<int, std::size_t> bus_index;
    for (std::size_t k = 0; k < buses.size(); ++k) bus_index[buses[k]->id] = k;

    std::vector<std::size_t> gen_order(c.generators.size());
    std::iota(gen_order.begin(), gen_order.end(), 0);
    std::stable_sort(gen_order.begin(), gen_order.end(), [&](std::size_t a, std::size_t b) {
        return c.generators[a].bus < c.generators[b].bus;
    });

    if (opts.ramp) {
        for (const Generator& g : c.generators) {
            if (!g.p_last || !g.ramp_up || !g.ramp_dn) {
                throw ValidationError("ramp rows need p_last, ramp_up and ramp_dn on generator at bus " +
                                      std::to_string(g.bus));
            }
        }
    }

    const std::size_t nb = buses.size();
    const std::size_t ng = gen_order.size();
    const std::size_t nw = reg.nodes.size();

    LinearRegion r;
    r.n_w = nw;
    r.n_x = 2 * nb + 2 * ng;
    r.reg_nodes = reg.nodes;
    r.w_max = reg.w_max;
    const std::size_t n = r.num_cols();
    const std::size_t v0 = nw, th0 = nw + nb, pg0 = nw + 2 * nb, qg0 = nw + 2 * nb + ng;

    for (int id : reg.nodes) r.columns.push_back("w[" + std::to_string(id) + "]");
    for (const Bus* b : buses) r.columns.push_back("v[" + std::to_string(b->id) + "]");
    for (const Bus* b : buses) r.columns.push_back("theta[" + std::to_string(b->id) + "]");
    for (std::size_t k = 0; k < ng; ++k) {
        r.columns.push_back("pg[" + std::to_string(k + 1) + "@" +
                            std::to_string(c.generators[gen_order[k]].bus) + "]");
    }
    for (std::size_t k = 0; k < ng; ++k) {
        r.columns.push_back("qg[" + std::to_string(k + 1) + "@" +
                            std::to_string(c.generators[gen_order[k]].bus) + "]");
    }

    // Bus admittance matrix: series admittance plus half line charging at each end.
    Mat G(nb, nb), B(nb, nb);
    for (const Branch& br : c.branches) {
        const std::size_t i = bus_index.at(br.from), j = bus_index.at(br.to);
        const Admittance y = series_admittance(br);
        G(i, i) += y.g;
        G(j, j) += y.g;
        B(i, i) += y.b + br.b_charging / 2;
        B(j, j) += y.b + br.b_charging / 2;
        G(i, j) -= y.g;
        G(j, i) -= y.g;
        B(i, j) -= y.b;
        B(j, i) -= y.b;
    }

    r.a_eq = Mat(0, n);
    r.a_in = Mat(0, n);

    // Active balance: sum pg + w - pd = sum_j G_ij (v_i + v_j - 1) + B_ij (theta_i - theta_j)
    for (std::size_t i = 0; i < nb; ++i) {
        auto row = r.a_eq.append_zero_row();
        double g_sum = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
            g_sum += G(i, j);
            row[v0 + i] -= G(i, j);
            row[v0 + j] -= G(i, j);
            row[th0 + i] -= B(i, j);
            row[th0 + j] += B(i, j);
        }
        for (std::size_t k = 0; k < ng; ++k) {
            if (bus_index.at(c.generators[gen_order[k]].bus) == i) row[pg0 + k] += 1.0;
        }
        for (std::size_t k = 0; k < nw; ++k) {
            if (bus_index.at(reg.nodes[k]) == i) row[k] += 1.0;
        }
        r.b_eq.push_back(buses[i]->p_load - g_sum);
    }

    // Reactive balance: sum qg - qd = sum_j G_ij (theta_i - theta_j) - B_ij (v_i + v_j - 1)
    for (std::size_t i = 0; i < nb; ++i) {
        auto row = r.a_eq.append_zero_row();
        double b_sum = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
            b_sum += B(i, j);
            row[th0 + i] -= G(i, j);
            row[th0 + j] += G(i, j);
            row[v0 + i] += B(i, j);
            row[v0 + j] += B(i, j);
        }
        for (std::size_t k = 0; k < ng; ++k) {
            if (bus_index.at(c.generators[gen_order[k]].bus) == i) row[qg0 + k] += 1.0;
        }
        r.b_eq.push_back(buses[i]->q_load + b_sum);
    }

    for (std::size_t i = 0; i < nb; ++i) {
        if (buses[i]->type != BusType::Slack) continue;
        auto row = r.a_eq.append_zero_row();
        row[th0 + i] = 1.0;
        r.b_eq.push_back(0.0);
    }

    auto add_le = [&](std::size_t col, double coef, double rhs) {
        auto row = r.a_in.append_zero_row();
        row[col] = coef;
        r.b_in.push_back(rhs);
    };

    for (std::size_t k = 0; k < ng; ++k) {
        const Generator& g = c.generators[gen_order[k]];
        add_le(pg0 + k, 1.0, g.p_max);
        add_le(pg0 + k, -1.0, -g.p_min);
        add_le(qg0 + k, 1.0, g.q_max);
        add_le(qg0 + k, -1.0, -g.q_min);
        if (opts.ramp) {
            add_le(pg0 + k, 1.0, *g.p_last + *g.ramp_up);
            add_le(pg0 + k, -1.0, -(*g.p_last - *g.ramp_dn));
        }
    }

    for (std::size_t i = 0; i < nb; ++i) {
        add_le(v0 + i, 1.0, buses[i]->v_max);
        add_le(v0 + i, -1.0, -buses[i]->v_min);
    }

    // Branch flow p_ij = G_br (v_j - v_i) + B_br (theta_i - theta_j) with G_br = -g, B_br = -b.
    for (const Branch& br : c.branches) {
        const std::size_t i = bus_index.at(br.from), j = bus_index.at(br.to);
        const Admittance y = series_admittance(br);
        const double gbr = -y.g, bbr = -y.b;
        auto flow_rows = [&](std::size_t a, std::size_t b) {
            Vec flow(n, 0.0);
            flow[v0 + b] += gbr;
            flow[v0 + a] -= gbr;
            flow[th0 + a] += bbr;
            flow[th0 + b] -= bbr;
            if (std::isfinite(br.p_max)) {
                r.a_in.append_row(flow);
                r.b_in.push_back(br.p_max);
            }
            if (std::isfinite(br.p_min)) {
                for (double& v : flow) v = -v;
                r.a_in.append_row(flow);
                r.b_in.push_back(-br.p_min);
            }
        };
        flow_rows(i, j);
        if (opts.reverse_branch_rows) flow_rows(j, i);
    }

    for (std::size_t k = 0; k < nw; ++k) add_le(k, -1.0, 0.0);

    r.check_shape();

    const Vec zero(nw, 0.0);
    if (!membership(r, zero)) {
        throw ValidationError("region is empty at zero REG output (load cannot be served)");
    }
    return r;
}

void append_region_rows(lp::LpProblem& lp, const LinearRegion& region, const AffineW& w,
                        std::size_t x_offset)
{
    const std::size_t nv = lp.num_vars();
    const std::size_t nw = region.n_w;
    if (w.base.size() != nw || w.map.rows() != nw || w.map.cols() != nv ||
        x_offset + region.n_x > nv) {
        throw ValidationError("append_region_rows: shape mismatch");
    }

    std::vector<std::size_t> live;   // LP columns the map actually touches
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nw; ++i) {
            if (w.map(i, j) != 0.0) {
                live.push_back(j);
                break;
            }
        }
    }

    auto emit = [&](std::span<const double> a, double b, bool eq) {
        Vec row(nv, 0.0);
        double rhs = b;
        for (std::size_t i = 0; i < nw; ++i) {
            if (a[i] == 0.0) continue;
            rhs -= a[i] * w.base[i];
            for (std::size_t j : live) row[j] += a[i] * w.map(i, j);
        }
        for (std::size_t k = 0; k < region.n_x; ++k) row[x_offset + k] += a[nw + k];
        if (eq) lp.add_eq(row, rhs);
        else lp.add_le(row, rhs);
    };

    for (std::size_t r = 0; r < region.a_eq.rows(); ++r) emit(region.a_eq.row(r), region.b_eq[r], true);
    for (std::size_t r = 0; r < region.a_in.rows(); ++r) emit(region.a_in.row(r), region.b_in[r], false);
}

bool membership(const LinearRegion& region, std::span<const double> w, lp::SolveCounter* counter)
{
    if (w.size() != region.n_w) {
        throw ValidationError("membership: w has " + std::to_string(w.size()) +
                              " entries, region has " + std::to_string(region.n_w));
    }
    lp::LpProblem p(region.n_x);
    append_region_rows(p, region, AffineW{Vec(w.begin(), w.end()), Mat(region.n_w, region.n_x)}, 0);
    return lp::feasible(p, {.counter = counter});
}

std::optional<double> support_value(const LinearRegion& region, std::span<const double> c,
                                    lp::SolveCounter* counter)
{
    if (c.size() != region.n_w) throw ValidationError("support_value: dimension mismatch");
    lp::LpProblem p(region.num_cols());
    for (std::size_t i = 0; i < region.n_w; ++i) p.objective[i] = -c[i];
    Mat map(region.n_w, region.num_cols());
    for (std::size_t i = 0; i < region.n_w; ++i) map(i, i) = 1.0;
    append_region_rows(p, region, AffineW{Vec(region.n_w, 0.0), std::move(map)}, region.n_w);
    const lp::LpResult r = lp::solve(p, {.counter = counter});
    if (r.status == lp::LpStatus::Unbounded) return std::nullopt;
    if (r.status == lp::LpStatus::Infeasible) throw ValidationError("support_value: region is empty");
    return -r.objective_value;
}

}  // namespace polyproj
