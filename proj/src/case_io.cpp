#include "polyproj/case_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polyproj/errors.hpp"

namespace polyproj {

using nlohmann::json;

std::string_view to_string(BusType t)
{
    switch (t) {
        case BusType::Slack: return "slack";
        case BusType::PV: return "PV";
        case BusType::PQ: return "PQ";
    }
    return "?";
}

const Bus* NetworkCase::find_bus(int id) const
{
    for (const Bus& b : buses) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok) throw ValidationError(msg);
}

bool finite_or_inf_pair(double lo, double hi)
{
    return !std::isnan(lo) && !std::isnan(hi) && lo <= hi;
}

}  // namespace

void validate(const NetworkCase& c)
{
    require(std::isfinite(c.base_mva) && c.base_mva > 0, "base_mva must be positive");
    require(!c.buses.empty(), "case has no buses");

    std::set<int> ids;
    int slack = 0;
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        const Bus& b = c.buses[i];
        const std::string at = "buses[" + std::to_string(i) + "]";
        require(ids.insert(b.id).second, at + ": duplicate bus id " + std::to_string(b.id));
        require(std::isfinite(b.p_load) && std::isfinite(b.q_load), at + ": non-finite load");
        require(std::isfinite(b.v_min) && std::isfinite(b.v_max) && b.v_min <= b.v_max,
                at + ": v_min > v_max");
        if (b.type == BusType::Slack) ++slack;
    }
    require(slack == 1, "expected exactly one slack bus, found " + std::to_string(slack));

    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        const Branch& br = c.branches[i];
        const std::string at = "branches[" + std::to_string(i) + "]";
        require(ids.count(br.from) && ids.count(br.to), at + ": endpoint references unknown bus");
        require(br.from != br.to, at + ": self loop");
        require(std::isfinite(br.r) && std::isfinite(br.x_series) && std::isfinite(br.b_charging),
                at + ": non-finite impedance");
        require(br.r != 0.0 || br.x_series != 0.0, at + ": zero series impedance");
        require(finite_or_inf_pair(br.p_min, br.p_max), at + ": p_min > p_max");
    }

    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        const Generator& g = c.generators[i];
        const std::string at = "generators[" + std::to_string(i) + "]";
        require(ids.count(g.bus), at + ": bus references unknown bus");
        require(std::isfinite(g.p_min) && std::isfinite(g.p_max) && g.p_min <= g.p_max,
                at + ": p_min > p_max");
        require(std::isfinite(g.q_min) && std::isfinite(g.q_max) && g.q_min <= g.q_max,
                at + ": q_min > q_max");
        if (g.ramp_up) require(*g.ramp_up >= 0, at + ": negative ramp_up");
        if (g.ramp_dn) require(*g.ramp_dn >= 0, at + ": negative ramp_dn");
    }
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field \"" + std::string(key) + "\" at " + path);
    return *it;
}

double number(const json& obj, const char* key, const std::string& path)
{
    const json& v = field(obj, key, path);
    if (!v.is_number()) {
        throw ParseError("field \"" + std::string(key) + "\" at " + path + " must be a number");
    }
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& path)
{
    const json& v = field(obj, key, path);
    if (!v.is_number_integer()) {
        throw ParseError("field \"" + std::string(key) + "\" at " + path + " must be an integer");
    }
    return v.get<int>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) {
        throw ParseError("field \"" + std::string(key) + "\" at " + path + " must be a number");
    }
    return it->get<double>();
}

const json& array(const json& obj, const char* key)
{
    const json& v = field(obj, key, "$");
    if (!v.is_array()) throw ParseError("field \"" + std::string(key) + "\" must be an array");
    return v;
}

BusType parse_bus_type(const json& v, const std::string& path)
{
    if (!v.is_string()) throw ParseError("field \"type\" at " + path + " must be a string");
    const std::string s = v.get<std::string>();
    if (s == "slack") return BusType::Slack;
    if (s == "PV") return BusType::PV;
    if (s == "PQ") return BusType::PQ;
    throw ParseError("field \"type\" at " + path + ": unknown bus type \"" + s + "\"");
}

}  // namespace

NetworkCase parse_case_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("case document must be a JSON object");

    NetworkCase c;
    c.base_mva = number(doc, "base_mva", "$");

    const json& buses = array(doc, "buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::string at = "buses[" + std::to_string(i) + "]";
        const json& b = buses[i];
        Bus bus;
        bus.id = integer(b, "id", at);
        bus.type = parse_bus_type(field(b, "type", at), at);
        bus.p_load = number(b, "p_load", at);
        bus.q_load = number(b, "q_load", at);
        bus.v_min = number(b, "v_min", at);
        bus.v_max = number(b, "v_max", at);
        c.buses.push_back(bus);
    }

    const json& branches = array(doc, "branches");
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const std::string at = "branches[" + std::to_string(i) + "]";
        const json& b = branches[i];
        Branch br;
        br.from = integer(b, "from", at);
        br.to = integer(b, "to", at);
        br.r = number(b, "r", at);
        br.x_series = number(b, "x_series", at);
        br.b_charging = number(b, "b_charging", at);
        br.p_min = optional_number(b, "p_min", at).value_or(-INFINITY);
        br.p_max = optional_number(b, "p_max", at).value_or(INFINITY);
        c.branches.push_back(br);
    }

    const json& gens = array(doc, "generators");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string at = "generators[" + std::to_string(i) + "]";
        const json& g = gens[i];
        Generator gen;
        gen.bus = integer(g, "bus", at);
        gen.p_min = number(g, "p_min", at);
        gen.p_max = number(g, "p_max", at);
        gen.q_min = number(g, "q_min", at);
        gen.q_max = number(g, "q_max", at);
        gen.ramp_up = optional_number(g, "ramp_up", at);
        gen.ramp_dn = optional_number(g, "ramp_dn", at);
        gen.p_last = optional_number(g, "p_last", at);
        c.generators.push_back(gen);
    }

    validate(c);
    return c;
}

MatpowerCase load_case_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open case file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (path.extension() == ".m") return parse_matpower_subset(ss.str());
    return MatpowerCase{parse_case_json(ss.str()), {}};
}

std::string case_to_json(const NetworkCase& c)
{
    auto limit = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc;
    doc["base_mva"] = c.base_mva;
    doc["buses"] = json::array();
    for (const Bus& b : c.buses) {
        doc["buses"].push_back({{"id", b.id},
                                {"type", std::string(to_string(b.type))},
                                {"p_load", b.p_load},
                                {"q_load", b.q_load},
                                {"v_min", b.v_min},
                                {"v_max", b.v_max}});
    }
    doc["branches"] = json::array();
    for (const Branch& br : c.branches) {
        doc["branches"].push_back({{"from", br.from},
                                   {"to", br.to},
                                   {"r", br.r},
                                   {"x_series", br.x_series},
                                   {"b_charging", br.b_charging},
                                   {"p_min", limit(br.p_min)},
                                   {"p_max", limit(br.p_max)}});
    }
    doc["generators"] = json::array();
    for (const Generator& g : c.generators) {
        json jg = {{"bus", g.bus},
                   {"p_min", g.p_min},
                   {"p_max", g.p_max},
                   {"q_min", g.q_min},
                   {"q_max", g.q_max}};
        if (g.ramp_up) jg["ramp_up"] = *g.ramp_up;
        if (g.ramp_dn) jg["ramp_dn"] = *g.ramp_dn;
        if (g.p_last) jg["p_last"] = *g.p_last;
        doc["generators"].push_back(std::move(jg));
    }
    return doc.dump(2);
}

}  // namespace polyproj
