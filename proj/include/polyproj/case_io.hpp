#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polyproj {

enum class BusType { Slack, PV, PQ };

std::string_view to_string(BusType t);

/// All electrical quantities are per-unit on the system base.
struct Bus
{
    int id = 0;
    BusType type = BusType::PQ;
    double p_load = 0.0;
    double q_load = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
};

/// Pi-model line. Flow limits may be infinite (unconstrained).
struct Branch
{
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x_series = 0.0;
    double b_charging = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
};

struct Generator
{
    int bus = 0;
    double p_min = 0.0;
    double p_max = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    std::optional<double> ramp_up;
    std::optional<double> ramp_dn;
    std::optional<double> p_last;
};

struct NetworkCase
{
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> generators;
    double base_mva = 100.0;

    const Bus* find_bus(int id) const;
};

/// Throws ValidationError on the first broken invariant.
void validate(const NetworkCase& c);

/**
 * Canonical case document:
 *   { "base_mva": 100,
 *     "buses":      [{"id", "type": "slack"|"PV"|"PQ", "p_load", "q_load", "v_min", "v_max"}],
 *     "branches":   [{"from", "to", "r", "x_series", "b_charging", "p_min", "p_max"}],
 *     "generators": [{"bus", "p_min", "p_max", "q_min", "q_max",
 *                     "ramp_up"?, "ramp_dn"?, "p_last"?}] }
 * Branch p_min / p_max may be null or omitted for an unconstrained line.
 *
 * Throws ParseError (bad syntax, missing or mistyped field; the message names
 * the JSON path) or ValidationError.
 */
NetworkCase parse_case_json(std::string_view text);

struct MatpowerCase
{
    NetworkCase network;
    std::vector<std::string> warnings;
};

/**
 * Reads the mpc.baseMVA, mpc.bus, mpc.gen and mpc.branch blocks of a
 * MATPOWER case file. MW / MVAr columns are divided by baseMVA; RATE_A is used
 * as a symmetric flow limit, with 0 meaning unconstrained. Out-of-service
 * elements, shunts and transformer taps are dropped with a warning.
 */
MatpowerCase parse_matpower_subset(std::string_view text);

/// Dispatches on extension: ".m" -> MATPOWER subset, anything else -> JSON.
MatpowerCase load_case_file(const std::filesystem::path& path);

std::string case_to_json(const NetworkCase& c);

}  // namespace polyproj
