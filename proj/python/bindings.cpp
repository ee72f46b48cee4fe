#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "polyproj/case_io.hpp"
#include "polyproj/errors.hpp"
#include "polyproj/projector.hpp"
#include "polyproj/region.hpp"
#include "polyproj/serialize.hpp"
#include "polyproj/verify.hpp"

namespace py = pybind11;
using namespace polyproj;

namespace {

LinearRegion build_region(const std::filesystem::path& case_path, const std::vector<int>& reg,
                          const std::vector<double>& w_max, bool ramp)
{
    const MatpowerCase mc = load_case_file(case_path);
    RegSpec spec{reg, w_max};
    if (spec.w_max.size() == 1 && reg.size() > 1) spec.w_max.assign(reg.size(), w_max[0]);
    return build_linear_region(mc.network, spec, {.ramp = ramp});
}

Mat to_mat(const std::vector<std::vector<double>>& rows, std::size_t cols)
{
    Mat m(0, cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ValidationError("matrix rows must all have the same length");
        m.append_row(r);
    }
    return m;
}

LinearRegion make_region_py(std::size_t n_w, const std::vector<std::vector<double>>& a_eq, const Vec& b_eq,
                            const std::vector<std::vector<double>>& a_in, const Vec& b_in)
{
    std::size_t cols = n_w;
    if (!a_eq.empty()) cols = a_eq.front().size();
    else if (!a_in.empty()) cols = a_in.front().size();
    return make_region(n_w, to_mat(a_eq, cols), b_eq, to_mat(a_in, cols), b_in);
}

py::dict report_dict(const ErrorReport& r)
{
    py::dict d;
    d["n_samples"] = r.n_samples;
    d["n_boundary"] = r.n_boundary;
    d["n_SR"] = r.n_SR;
    d["n_SA"] = r.n_SA;
    d["E_r"] = r.e_r ? py::cast(*r.e_r) : py::none();
    d["n_agree_all"] = r.n_agree_all;
    d["E_r_all"] = r.e_r_all ? py::cast(*r.e_r_all) : py::none();
    py::dict colors;
    for (int c = 0; c < 4; ++c) colors[py::str(std::string(to_string(static_cast<Color>(c))))] = r.color_counts[c];
    d["color_counts"] = colors;
    d["seed"] = r.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Projection of linearized power-flow regions onto renewable outputs";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    py::register_exception<SizeGuardExceeded>(m, "SizeGuardExceeded", error.ptr());
    py::register_exception<DepaExhausted>(m, "DepaExhausted", error.ptr());
    py::register_exception<InteriorPointInvalid>(m, "InteriorPointInvalid", error.ptr());
    py::register_exception<UnboundedRegion>(m, "UnboundedRegion", error.ptr());

    py::class_<LinearRegion>(m, "LinearRegion")
        .def_readonly("n_w", &LinearRegion::n_w)
        .def_readonly("n_x", &LinearRegion::n_x)
        .def_readonly("columns", &LinearRegion::columns)
        .def_readonly("reg_nodes", &LinearRegion::reg_nodes)
        .def_readwrite("w_max", &LinearRegion::w_max)
        .def_property_readonly("n_eq", [](const LinearRegion& r) { return r.a_eq.rows(); })
        .def_property_readonly("n_ineq", [](const LinearRegion& r) { return r.a_in.rows(); })
        .def("to_json", &region_to_json)
        .def_static("from_json", &region_from_json, py::arg("text"));

    py::class_<Polytope>(m, "Polytope")
        .def_readonly("dimension", &Polytope::dimension)
        .def_readonly("box_max", &Polytope::box_max)
        .def_property_readonly("facets",
                               [](const Polytope& p) {
                                   py::list out;
                                   for (std::size_t k = 0; k < p.facets.size(); ++k) {
                                       out.append(py::make_tuple(p.facets[k].normal, p.facets[k].offset,
                                                                 std::string(to_string(p.provenance[k]))));
                                   }
                                   return out;
                               })
        .def("count", [](const Polytope& p, const std::string& prov) {
            return p.count(provenance_from_string(prov));
        })
        .def("contains", &Polytope::contains, py::arg("w"), py::arg("tol") = 1e-9)
        .def("to_json", [](const Polytope& p) { return polytope_to_json(p); })
        .def_static("from_json", &polytope_from_json, py::arg("text"))
        .def_static("box", &Polytope::box, py::arg("box_max"));

    py::class_<PhiStats>(m, "PhiStats")
        .def_readonly("iterations", &PhiStats::iterations)
        .def_readonly("lp_solves", &PhiStats::lp_solves)
        .def_readonly("depa_invocations", &PhiStats::depa_invocations)
        .def_readonly("discarded_by_angle", &PhiStats::discarded_by_angle);

    py::class_<PhiResult>(m, "PhiResult")
        .def_readonly("polytope", &PhiResult::polytope)
        .def_readonly("stats", &PhiResult::stats)
        .def_readonly("iteration_cap_reached", &PhiResult::iteration_cap_reached);

    m.def("make_region", &make_region_py, py::arg("n_w"), py::arg("a_eq"), py::arg("b_eq"), py::arg("a_in"),
          py::arg("b_in"));
    m.def("build_region", &build_region, py::arg("case_path"), py::arg("reg"), py::arg("w_max"),
          py::arg("ramp") = false, "Linearized region of a JSON or MATPOWER case.");
    m.def(
        "membership",
        [](const LinearRegion& r, const std::vector<double>& w) { return membership(r, w); },
        py::arg("region"), py::arg("w"));
    m.def(
        "support_value",
        [](const LinearRegion& r, const std::vector<double>& c) { return support_value(r, c); },
        py::arg("region"), py::arg("c"));
    m.def(
        "phi_run",
        [](const LinearRegion& r, std::optional<std::vector<double>> w_max, double phi_deg, double eps,
           std::uint64_t seed, std::size_t max_iterations) {
            PhgConfig cfg;
            cfg.phi_deg = phi_deg;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.max_iterations = max_iterations;
            const Vec box = w_max ? *w_max : r.w_max;
            py::gil_scoped_release release;
            return phi_run(r, box, cfg);
        },
        py::arg("region"), py::arg("w_max") = py::none(), py::arg("phi_deg") = 0.0, py::arg("eps") = 1e-6,
        py::arg("seed") = 42, py::arg("max_iterations") = 10000);
    m.def(
        "classify_samples",
        [](const LinearRegion& r, const Polytope& p, std::size_t n, std::uint64_t seed) {
            Classification c;
            {
                py::gil_scoped_release release;
                c = classify_samples(r, p, n, seed);
            }
            return report_dict(c.report);
        },
        py::arg("region"), py::arg("polytope"), py::arg("n") = 10000, py::arg("seed") = 42);
    m.def(
        "fme_project", [](const LinearRegion& r) { return fme_project(r); }, py::arg("region"));
    m.def(
        "regions_equivalent",
        [](const Polytope& p, const Polytope& q, double tol) {
            const Equivalence e = regions_equivalent(p, q, tol);
            return py::make_tuple(e.equal, e.max_violation);
        },
        py::arg("p"), py::arg("q"), py::arg("tol") = 1e-6);
    m.def(
        "facet_support_audit",
        [](const LinearRegion& r, const Polytope& p) {
            py::list out;
            for (const FacetAudit& a : facet_support_audit(r, p)) {
                out.append(py::make_tuple(a.facet_index, a.validity_gap, a.support_gap));
            }
            return out;
        },
        py::arg("region"), py::arg("polytope"));
    m.def("enumerate_vertices", &enumerate_vertices_2d3d, py::arg("polytope"));
}
