#include "polyproj/serialize.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>

#include "polyproj/errors.hpp"

namespace polyproj {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

ordered_json block_to_json(const Mat& a, const Vec& b)
{
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return ordered_json{{"A", rows}, {"b", b}};
}

json parse(std::string_view text, const char* what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
    }
}

const json& field(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field \"" + std::string(key) + "\" at " + path);
    return *it;
}

Vec numbers(const json& v, const std::string& path)
{
    if (!v.is_array()) throw ParseError(path + " must be an array of numbers");
    Vec out;
    out.reserve(v.size());
    for (const json& x : v) {
        if (!x.is_number()) throw ParseError(path + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::size_t count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned()) throw ParseError(path + " must be a non-negative integer");
    return v.get<std::size_t>();
}

void read_block(const json& doc, const char* key, std::size_t cols, Mat& a, Vec& b)
{
    const json& blk = field(doc, key, "region");
    const json& rows = field(blk, "A", key);
    if (!rows.is_array()) throw ParseError(std::string(key) + ".A must be an array of rows");
    a = Mat(0, cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vec r = numbers(rows[i], std::string(key) + ".A[" + std::to_string(i) + "]");
        if (r.size() != cols) {
            throw ValidationError(std::string(key) + ".A[" + std::to_string(i) + "] has " +
                                  std::to_string(r.size()) + " entries, expected " + std::to_string(cols));
        }
        a.append_row(r);
    }
    b = numbers(field(blk, "b", key), std::string(key) + ".b");
}

ordered_json stats_to_json(const ProjectionInfo& info, const Polytope& p)
{
    const PhiStats& s = info.stats;
    return ordered_json{
        {"facets", p.facets.size()},
        {"initial_box", p.count(Provenance::InitialBox)},
        {"discovered", p.count(Provenance::Discovered)},
        {"iteration_cap_reached", info.iteration_cap_reached},
        {"phi_deg", info.config.phi_deg},
        {"eps", info.config.eps},
        {"seed", info.config.seed},
        {"iterations", s.iterations},
        {"lp_solves", s.lp_solves},
        {"depa_invocations", s.depa_invocations},
        {"discarded_by_angle", s.discarded_by_angle},
        {"candidates_enqueued", s.candidates_enqueued},
        {"candidates_pruned", s.candidates_pruned},
        {"bad_boundary_points", s.bad_boundary_points},
        {"certification_failures", s.certification_failures},
        {"interior_pops", s.interior_pops},
        {"requeued", s.requeued},
        {"sweep_rounds", s.sweep_rounds},
        {"sweep_candidates", s.sweep_candidates},
        {"sweep_skipped", s.sweep_skipped},
    };
}

ordered_json optional_number(const std::optional<double>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string region_to_json(const LinearRegion& region)
{
    ordered_json index = ordered_json::object();
    for (std::size_t j = 0; j < region.columns.size(); ++j) index[region.columns[j]] = j;
    ordered_json doc{
        {"n_w", region.n_w},
        {"n_x", region.n_x},
        {"columns", region.columns},
        {"variable_index", index},
        {"reg_nodes", region.reg_nodes},
        {"w_max", region.w_max},
        {"eq_block", block_to_json(region.a_eq, region.b_eq)},
        {"ineq_block", block_to_json(region.a_in, region.b_in)},
    };
    return doc.dump(2) + "\n";
}

LinearRegion region_from_json(std::string_view text)
{
    const json doc = parse(text, "region");
    if (!doc.is_object()) throw ParseError("region document must be a JSON object");
    LinearRegion r;
    r.n_w = count(field(doc, "n_w", "region"), "n_w");
    r.n_x = count(field(doc, "n_x", "region"), "n_x");
    read_block(doc, "eq_block", r.num_cols(), r.a_eq, r.b_eq);
    read_block(doc, "ineq_block", r.num_cols(), r.a_in, r.b_in);

    if (auto it = doc.find("columns"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("columns must be an array of strings");
        for (const json& c : *it) {
            if (!c.is_string()) throw ParseError("columns must be an array of strings");
            r.columns.push_back(c.get<std::string>());
        }
    } else {
        for (std::size_t j = 0; j < r.n_w; ++j) r.columns.push_back("w" + std::to_string(j + 1));
        for (std::size_t j = 0; j < r.n_x; ++j) r.columns.push_back("x" + std::to_string(j + 1));
    }
    if (auto it = doc.find("w_max"); it != doc.end() && !it->is_null()) r.w_max = numbers(*it, "w_max");
    if (auto it = doc.find("reg_nodes"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("reg_nodes must be an array of integers");
        for (const json& v : *it) {
            if (!v.is_number_integer()) throw ParseError("reg_nodes must be an array of integers");
            r.reg_nodes.push_back(v.get<int>());
        }
    }
    r.check_shape();
    if (!r.w_max.empty() && r.w_max.size() != r.n_w) throw ValidationError("w_max has the wrong length");
    return r;
}

std::string polytope_to_json(const Polytope& p, const ProjectionInfo* info)
{
    ordered_json facets = ordered_json::array();
    for (std::size_t k = 0; k < p.facets.size(); ++k) {
        facets.push_back(ordered_json{{"normal", p.facets[k].normal},
                                      {"offset", p.facets[k].offset},
                                      {"provenance", std::string(to_string(p.provenance[k]))}});
    }
    ordered_json doc{{"dimension", p.dimension}, {"facets", facets}, {"box", p.box_max}};
    doc["stats"] = info ? stats_to_json(*info, p) : ordered_json::object();
    return doc.dump(2) + "\n";
}

Polytope polytope_from_json(std::string_view text)
{
    const json doc = parse(text, "polytope");
    if (!doc.is_object()) throw ParseError("polytope document must be a JSON object");
    Polytope p;
    p.dimension = count(field(doc, "dimension", "polytope"), "dimension");
    if (auto it = doc.find("box"); it != doc.end() && !it->is_null()) p.box_max = numbers(*it, "box");
    if (!p.box_max.empty() && p.box_max.size() != p.dimension) throw ValidationError("box has the wrong length");
    const json& facets = field(doc, "facets", "polytope");
    if (!facets.is_array()) throw ParseError("facets must be an array");
    for (std::size_t k = 0; k < facets.size(); ++k) {
        const std::string path = "facets[" + std::to_string(k) + "]";
        Hyperplane h;
        h.normal = numbers(field(facets[k], "normal", path), path + ".normal");
        const json& off = field(facets[k], "offset", path);
        if (!off.is_number()) throw ParseError(path + ".offset must be a number");
        h.offset = off.get<double>();
        const json& prov = field(facets[k], "provenance", path);
        if (!prov.is_string()) throw ParseError(path + ".provenance must be a string");
        if (h.normal.size() != p.dimension) throw ValidationError(path + ": normal has the wrong length");
        if (std::abs(norm2(h.normal) - 1.0) > 1e-9) throw ValidationError(path + ": normal is not unit length");
        p.add(std::move(h), provenance_from_string(prov.get<std::string>()));
    }
    return p;
}

std::string report_to_json(const ErrorReport& r, const std::vector<FacetAudit>* audit)
{
    ordered_json colors{{"Green", r.color_counts[0]},
                        {"Blue", r.color_counts[1]},
                        {"Yellow", r.color_counts[2]},
                        {"Red", r.color_counts[3]}};
    ordered_json doc{
        {"n_samples", r.n_samples},
        {"seed", r.seed},
        {"n_boundary", r.n_boundary},
        {"boundary_tolerance", kBoundarySampleTol},
        {"n_SR", r.n_SR},
        {"n_SA", r.n_SA},
        {"E_r", optional_number(r.e_r)},
        {"n_agree_all", r.n_agree_all},
        {"E_r_all", optional_number(r.e_r_all)},
        {"color_counts", colors},
    };
    if (audit) {
        ordered_json rows = ordered_json::array();
        for (const FacetAudit& a : *audit) {
            rows.push_back(ordered_json{{"facet", a.facet_index},
                                        {"validity_gap", a.validity_gap},
                                        {"support_gap", a.support_gap}});
        }
        doc["facet_audit"] = rows;
    }
    return doc.dump(2) + "\n";
}

std::string samples_csv(const std::vector<SampleClass>& samples)
{
    const std::size_t n = samples.empty() ? 0 : samples.front().w.size();
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += "w_" + std::to_string(i + 1) + ",";
    out += "in_polytope,in_region,color\n";
    for (const SampleClass& s : samples) {
        for (double v : s.w) out += format_double(v) + ",";
        out += s.in_polytope ? "1," : "0,";
        out += s.in_region ? "1," : "0,";
        out += to_string(s.color);
        out += '\n';
    }
    return out;
}

std::string vertices_csv(const std::vector<Vec>& vertices)
{
    const std::size_t n = vertices.empty() ? 0 : vertices.front().size();
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (i ? ",w_" : "w_") + std::to_string(i + 1);
    out += '\n';
    for (const Vec& v : vertices) {
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
        out += '\n';
    }
    return out;
}

}  // namespace polyproj
