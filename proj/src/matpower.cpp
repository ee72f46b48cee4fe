#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyproj/case_io.hpp"
#include "polyproj/errors.hpp"

namespace polyproj {

namespace {

// Column positions (0-based) in the MATPOWER case format.
namespace bus_col {
constexpr std::size_t id = 0, type = 1, pd = 2, qd = 3, gs = 4, bs = 5, vmax = 11, vmin = 12;
constexpr std::size_t count = 13;
}  // namespace bus_col

namespace gen_col {
constexpr std::size_t bus = 0, pg = 1, qmax = 3, qmin = 4, status = 7, pmax = 8, pmin = 9;
constexpr std::size_t ramp_30 = 18;
constexpr std::size_t count = 10;
}  // namespace gen_col

namespace branch_col {
constexpr std::size_t from = 0, to = 1, r = 2, x = 3, b = 4, rate_a = 5, tap = 8, shift = 9,
                      status = 10;
constexpr std::size_t count = 11;
}  // namespace branch_col

struct Matrix
{
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> lines;   // source line of each row
    std::size_t first_line = 0;
};

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line)
{
    const auto p = line.find('%');
    return p == std::string_view::npos ? line : line.substr(0, p);
}

ParseError error_at(std::size_t line, const std::string& msg)
{
    return ParseError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view tok, std::size_t line)
{
    if (tok == "Inf" || tok == "inf") return INFINITY;
    if (tok == "-Inf" || tok == "-inf") return -INFINITY;
    std::string_view t = tok;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw error_at(line, "invalid number \"" + std::string(tok) + "\"");
    }
    return v;
}

std::vector<double> parse_row(std::string_view text, std::size_t line)
{
    std::vector<double> row;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
        if (j > i) row.push_back(parse_number(text.substr(i, j - i), line));
        i = j;
    }
    return row;
}

struct Parsed
{
    std::optional<double> base_mva;
    std::map<std::string, Matrix> matrices;
    std::vector<std::string> skipped;
};

Parsed scan(std::string_view text)
{
    Parsed out;
    std::string current;        // matrix being read, empty when outside
    bool skipping = false;      // inside a non-numeric block we ignore
    char skip_close = ']';
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = strip_comment(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;

        if (skipping) {
            if (line.find(skip_close) != std::string_view::npos) skipping = false;
            continue;
        }

        if (current.empty()) {
            line = trim(line);
            if (!line.starts_with("mpc.")) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) continue;
            const std::string name(trim(line.substr(4, eq - 4)));
            std::string_view rhs = trim(line.substr(eq + 1));

            if (name == "baseMVA") {
                if (rhs.ends_with(';')) rhs.remove_suffix(1);
                out.base_mva = parse_number(trim(rhs), line_no);
                continue;
            }
            if (!rhs.starts_with('[')) {
                if (rhs.starts_with('{')) {
                    out.skipped.push_back(name);
                    if (rhs.find('}') == std::string_view::npos) {
                        skipping = true;
                        skip_close = '}';
                    }
                }
                continue;
            }
            if (name != "bus" && name != "gen" && name != "branch") {
                out.skipped.push_back(name);
                if (rhs.find(']') == std::string_view::npos) {
                    skipping = true;
                    skip_close = ']';
                }
                continue;
            }
            if (out.matrices.count(name)) throw error_at(line_no, "duplicate mpc." + name);
            current = name;
            out.matrices[name].first_line = line_no;
            line = rhs.substr(1);
        }

        // Inside a matrix: rows are separated by ';' or line breaks.
        bool closes = false;
        const auto close = line.find(']');
        if (close != std::string_view::npos) {
            closes = true;
            line = line.substr(0, close);
        }
        Matrix& m = out.matrices[current];
        std::size_t start = 0;
        while (start <= line.size()) {
            auto semi = line.find(';', start);
            if (semi == std::string_view::npos) semi = line.size();
            const std::string_view piece = trim(line.substr(start, semi - start));
            if (!piece.empty()) {
                std::vector<double> row = parse_row(piece, line_no);
                if (!m.rows.empty() && row.size() != m.rows.front().size()) {
                    throw error_at(line_no, "mpc." + current + " row has " +
                                                std::to_string(row.size()) + " columns, expected " +
                                                std::to_string(m.rows.front().size()));
                }
                m.rows.push_back(std::move(row));
                m.lines.push_back(line_no);
            }
            start = semi + 1;
        }
        if (closes) current.clear();
        if (pos > text.size()) break;
    }
    if (!current.empty()) throw ParseError("unterminated matrix mpc." + current);
    if (skipping) throw ParseError("unterminated block at end of file");
    return out;
}

const Matrix& need(const Parsed& p, const char* name, std::size_t min_cols)
{
    auto it = p.matrices.find(name);
    if (it == p.matrices.end()) throw ParseError(std::string("missing matrix mpc.") + name);
    const Matrix& m = it->second;
    if (!m.rows.empty() && m.rows.front().size() < min_cols) {
        throw error_at(m.first_line, std::string("mpc.") + name + " needs at least " +
                                         std::to_string(min_cols) + " columns");
    }
    return m;
}

int as_id(double v, std::size_t line)
{
    if (v != std::floor(v) || std::abs(v) > 1e9) throw error_at(line, "non-integer id");
    return static_cast<int>(v);
}

}  // namespace

MatpowerCase parse_matpower_subset(std::string_view text)
{
    const Parsed p = scan(text);
    if (!p.base_mva) throw ParseError("missing mpc.baseMVA");
    const double base = *p.base_mva;
    if (!(base > 0) || !std::isfinite(base)) throw ParseError("mpc.baseMVA must be positive");

    MatpowerCase out;
    NetworkCase& c = out.network;
    c.base_mva = base;
    auto warn = [&](std::string msg) { out.warnings.push_back(std::move(msg)); };
    std::set<int> isolated;

    const Matrix& bus = need(p, "bus", bus_col::count);
    for (std::size_t i = 0; i < bus.rows.size(); ++i) {
        const auto& r = bus.rows[i];
        const std::size_t line = bus.lines[i];
        Bus b;
        b.id = as_id(r[bus_col::id], line);
        const int type = as_id(r[bus_col::type], line);
        if (type == 4) {
            warn("bus " + std::to_string(b.id) + " is isolated (type 4) and was dropped");
            isolated.insert(b.id);
            continue;
        }
        if (type == 3) b.type = BusType::Slack;
        else if (type == 2) b.type = BusType::PV;
        else if (type == 1) b.type = BusType::PQ;
        else throw error_at(line, "unknown bus type " + std::to_string(type));
        b.p_load = r[bus_col::pd] / base;
        b.q_load = r[bus_col::qd] / base;
        b.v_min = r[bus_col::vmin];
        b.v_max = r[bus_col::vmax];
        if (r[bus_col::gs] != 0.0 || r[bus_col::bs] != 0.0) {
            warn("bus " + std::to_string(b.id) + " shunt (Gs, Bs) ignored");
        }
        c.buses.push_back(b);
    }

    const Matrix& gen = need(p, "gen", gen_col::count);
    for (std::size_t i = 0; i < gen.rows.size(); ++i) {
        const auto& r = gen.rows[i];
        const std::size_t line = gen.lines[i];
        Generator g;
        g.bus = as_id(r[gen_col::bus], line);
        if (r[gen_col::status] <= 0) {
            warn("generator " + std::to_string(i + 1) + " at bus " + std::to_string(g.bus) +
                 " is out of service and was dropped");
            continue;
        }
        g.p_min = r[gen_col::pmin] / base;
        g.p_max = r[gen_col::pmax] / base;
        g.q_min = r[gen_col::qmin] / base;
        g.q_max = r[gen_col::qmax] / base;
        g.p_last = r[gen_col::pg] / base;
        if (r.size() > gen_col::ramp_30 && r[gen_col::ramp_30] > 0) {
            g.ramp_up = r[gen_col::ramp_30] / base;
            g.ramp_dn = r[gen_col::ramp_30] / base;
        }
        c.generators.push_back(g);
    }

    const Matrix& branch = need(p, "branch", branch_col::count);
    for (std::size_t i = 0; i < branch.rows.size(); ++i) {
        const auto& r = branch.rows[i];
        const std::size_t line = branch.lines[i];
        Branch br;
        br.from = as_id(r[branch_col::from], line);
        br.to = as_id(r[branch_col::to], line);
        const std::string tag = "branch " + std::to_string(i + 1) + " (" +
                                std::to_string(br.from) + "-" + std::to_string(br.to) + ")";
        if (r[branch_col::status] <= 0) {
            warn(tag + " is out of service and was dropped");
            continue;
        }
        br.r = r[branch_col::r];
        br.x_series = r[branch_col::x];
        br.b_charging = r[branch_col::b];
        const double rate = r[branch_col::rate_a];
        if (rate == 0.0) {
            br.p_min = -INFINITY;
            br.p_max = INFINITY;
        } else {
            br.p_min = -rate / base;
            br.p_max = rate / base;
        }
        const double tap = r[branch_col::tap];
        if (tap != 0.0 && tap != 1.0) warn(tag + " tap ratio ignored");
        if (r[branch_col::shift] != 0.0) warn(tag + " phase shift ignored");
        c.branches.push_back(br);
    }

    for (const std::string& s : p.skipped) warn("mpc." + s + " ignored");

    // Elements attached to isolated buses go too.
    std::erase_if(c.generators, [&](const Generator& g) {
        if (!isolated.count(g.bus)) return false;
        warn("generator at isolated bus " + std::to_string(g.bus) + " dropped");
        return true;
    });
    std::erase_if(c.branches, [&](const Branch& br) {
        if (!isolated.count(br.from) && !isolated.count(br.to)) return false;
        warn("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
             " touches an isolated bus and was dropped");
        return true;
    });

    validate(c);
    return out;
}

}  // namespace polyproj
