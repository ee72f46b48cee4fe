#pragma once

// Nonlinear AC injections and branch flows computed with complex arithmetic,
// used to check the linearized rows by finite differences.

#include <complex>
#include <map>
#include <vector>

#include "polyproj/case_io.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct AcNetwork
{
    std::vector<int> ids;                       // ascending bus ids
    std::map<int, std::size_t> index;
    std::vector<std::vector<cplx>> y;           // bus admittance matrix
};

inline AcNetwork build_ac(const polyproj::NetworkCase& c)
{
    AcNetwork n;
    for (const auto& b : c.buses) n.ids.push_back(b.id);
    std::sort(n.ids.begin(), n.ids.end());
    for (std::size_t k = 0; k < n.ids.size(); ++k) n.index[n.ids[k]] = k;
    n.y.assign(n.ids.size(), std::vector<cplx>(n.ids.size()));
    for (const auto& br : c.branches) {
        const cplx ys = 1.0 / cplx(br.r, br.x_series);
        const cplx ysh(0.0, br.b_charging / 2);
        const std::size_t i = n.index.at(br.from), j = n.index.at(br.to);
        n.y[i][i] += ys + ysh;
        n.y[j][j] += ys + ysh;
        n.y[i][j] -= ys;
        n.y[j][i] -= ys;
    }
    return n;
}

/// Complex injection S_i = V_i conj(sum_j Y_ij V_j).
inline std::vector<cplx> injections(const AcNetwork& n, const std::vector<double>& v,
                                    const std::vector<double>& th)
{
    const std::size_t nb = n.ids.size();
    std::vector<cplx> volt(nb), s(nb);
    for (std::size_t i = 0; i < nb; ++i) volt[i] = std::polar(v[i], th[i]);
    for (std::size_t i = 0; i < nb; ++i) {
        cplx cur = 0;
        for (std::size_t j = 0; j < nb; ++j) cur += n.y[i][j] * volt[j];
        s[i] = volt[i] * std::conj(cur);
    }
    return s;
}

/// Active power entering the series element at the `from` end.
inline double series_flow(const polyproj::Branch& br, double vi, double ti, double vj, double tj)
{
    const cplx ys = 1.0 / cplx(br.r, br.x_series);
    const cplx a = std::polar(vi, ti), b = std::polar(vj, tj);
    return (a * std::conj(ys * (a - b))).real();
}

}  // namespace oracle
