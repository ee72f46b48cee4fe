#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "polyproj/case_io.hpp"
#include "polyproj/errors.hpp"
#include "support.hpp"

using namespace polyproj;

namespace {

const char* kTwoBus = R"({
  "base_mva": 100,
  "buses": [
    {"id": 1, "type": "slack", "p_load": 0, "q_load": 0, "v_min": 0.9, "v_max": 1.1},
    {"id": 2, "type": "PQ", "p_load": 0.5, "q_load": 0.1, "v_min": 0.9, "v_max": 1.1}
  ],
  "branches": [
    {"from": 1, "to": 2, "r": 0.01, "x_series": 0.1, "b_charging": 0, "p_min": null, "p_max": 1}
  ],
  "generators": [{"bus": 1, "p_min": 0, "p_max": 2, "q_min": -1, "q_max": 1}]
})";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto p = s.find(from);
    REQUIRE(p != std::string::npos);
    return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("parse_case_json")
{
    SUBCASE("two-bus document")
    {
        NetworkCase c = parse_case_json(kTwoBus);
        CHECK(c.buses.size() == 2);
        CHECK(c.branches.size() == 1);
        CHECK(c.generators.size() == 1);
        CHECK(c.buses[0].type == BusType::Slack);
        CHECK(std::isinf(c.branches[0].p_min));
        CHECK(c.branches[0].p_min < 0);
        CHECK(c.branches[0].p_max == 1.0);
        CHECK_FALSE(c.generators[0].p_last.has_value());
    }
    SUBCASE("round trip through case_to_json")
    {
        NetworkCase c = parse_case_json(kTwoBus);
        NetworkCase d = parse_case_json(case_to_json(c));
        CHECK(case_to_json(c) == case_to_json(d));
    }
    SUBCASE("missing branches")
    {
        std::string doc = R"({"base_mva": 100, "buses": [], "generators": []})";
        try {
            parse_case_json(doc);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("branches") != std::string::npos);
        }
    }
    SUBCASE("field path is reported")
    {
        const std::string doc = replace(kTwoBus, R"("v_max": 1.1},)", R"("vmax": 1.1},)");
        try {
            parse_case_json(doc);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("buses[0]") != std::string::npos);
            CHECK(std::string(e.what()).find("v_max") != std::string::npos);
        }
    }
    SUBCASE("two slack buses")
    {
        const std::string doc = replace(kTwoBus, R"("type": "PQ")", R"("type": "slack")");
        CHECK_THROWS_AS(parse_case_json(doc), ValidationError);
    }
    SUBCASE("malformed syntax")
    {
        CHECK_THROWS_AS(parse_case_json("{\"base_mva\": 100,"), ParseError);
    }
    SUBCASE("dangling branch endpoint")
    {
        const std::string doc = replace(kTwoBus, R"("to": 2)", R"("to": 7)");
        CHECK_THROWS_AS(parse_case_json(doc), ValidationError);
    }
    SUBCASE("crossed generator limits")
    {
        const std::string doc = replace(kTwoBus, R"("q_min": -1)", R"("q_min": 3)");
        CHECK_THROWS_AS(parse_case_json(doc), ValidationError);
    }
}

namespace {

const char* kSmallMatpower = R"(function mpc = small
mpc.version = '2';
mpc.baseMVA = 100;
%% bus data
mpc.bus = [
	1	3	0	0	0	0	1	1	0	135	1	1.05	0.95;
	2	1	50	10	0	0	1	1	0	135	1	1.05	0.95;
];
mpc.gen = [
	1	20	0	50	-50	1	100	1	150	0;
];
mpc.branch = [
	1	2	0.01	0.1	0.02	0	0	0	0	0	1	-360	360;
];
)";

}  // namespace

TEST_CASE("parse_matpower_subset")
{
    SUBCASE("30-bus case element counts")
    {
        MatpowerCase m = parse_matpower_subset(test_support::read_data("case30.m"));
        CHECK(m.network.buses.size() == 30);
        CHECK(m.network.branches.size() == 41);
        CHECK(m.network.generators.size() == 6);
        CHECK(m.network.base_mva == 100.0);
        // Shunts at buses 5 and 24 are not modeled.
        int shunt_warnings = 0;
        for (const auto& w : m.warnings) shunt_warnings += w.find("shunt") != std::string::npos;
        CHECK(shunt_warnings == 2);
    }
    SUBCASE("per-unit conversion and type codes")
    {
        MatpowerCase m = parse_matpower_subset(kSmallMatpower);
        const NetworkCase& c = m.network;
        CHECK(c.buses[0].type == BusType::Slack);
        CHECK(c.buses[1].type == BusType::PQ);
        CHECK(c.buses[1].p_load == doctest::Approx(0.5));
        CHECK(c.buses[1].q_load == doctest::Approx(0.1));
        CHECK(c.generators[0].p_max == doctest::Approx(1.5));
        CHECK(c.generators[0].q_min == doctest::Approx(-0.5));
        CHECK(*c.generators[0].p_last == doctest::Approx(0.2));
        CHECK_FALSE(c.generators[0].ramp_up.has_value());
        CHECK(c.branches[0].b_charging == doctest::Approx(0.02));
    }
    SUBCASE("RATE_A = 0 means unconstrained")
    {
        MatpowerCase m = parse_matpower_subset(kSmallMatpower);
        CHECK(std::isinf(m.network.branches[0].p_max));
        CHECK(m.network.branches[0].p_max > 0);
        CHECK(std::isinf(m.network.branches[0].p_min));
        CHECK(m.network.branches[0].p_min < 0);
    }
    SUBCASE("wrong column count reports the line")
    {
        const std::string bad =
            replace(kSmallMatpower, "2\t1\t50\t10\t0\t0\t1\t1\t0\t135\t1\t1.05\t0.95;",
                    "2\t1\t50\t10\t0\t0\t1\t1\t0\t135\t1\t1.05;");
        try {
            parse_matpower_subset(bad);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        }
    }
    SUBCASE("missing block")
    {
        const std::string bad = replace(kSmallMatpower, "mpc.baseMVA = 100;", "");
        CHECK_THROWS_AS(parse_matpower_subset(bad), ParseError);
    }
    SUBCASE("out-of-service elements are dropped with a warning")
    {
        const std::string text = replace(kSmallMatpower, "1\t100\t1\t150", "1\t100\t0\t150");
        MatpowerCase m = parse_matpower_subset(text);
        CHECK(m.network.generators.empty());
        REQUIRE_FALSE(m.warnings.empty());
        CHECK(m.warnings.front().find("out of service") != std::string::npos);
    }
}
