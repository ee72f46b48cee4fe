#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyproj/case_io.hpp"
#include "polyproj/errors.hpp"
#include "polyproj/projector.hpp"
#include "polyproj/region.hpp"
#include "polyproj/serialize.hpp"
#include "polyproj/verify.hpp"

namespace polyproj::cli {

namespace fs = std::filesystem;

namespace {

struct Options
{
    std::string case_path;
    std::string region_path;
    std::string polytope_path;
    std::string reg;
    std::string wmax;
    double phi = 0.0;
    double eps = 1e-6;
    std::size_t samples = 10000;
    std::uint64_t seed = 42;
    std::size_t max_iterations = 10000;
    std::string out = ".";
    std::string compare;
    bool ramp = false;
    unsigned threads = 0;
};

std::string read_file(const std::string& path)
{
    if (!fs::exists(path)) throw ParseError("no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const std::string& dir, const std::string& name, const std::string& text)
{
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / name;
    std::ofstream o(p, std::ios::binary);
    o << text;
    if (!o) throw Error("cannot write " + p.string());
    return p;
}

std::vector<double> parse_list(const std::string& text, const char* flag)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(std::string(flag) + ": cannot read \"" + item + "\" as a number");
        }
    }
    if (out.empty()) throw ValidationError(std::string(flag) + " is empty");
    return out;
}

Vec expand_wmax(const std::string& text, std::size_t n)
{
    Vec w = parse_list(text, "--wmax");
    if (w.size() == 1) w.assign(n, w[0]);
    if (w.size() != n) {
        throw ValidationError("--wmax has " + std::to_string(w.size()) + " values for " + std::to_string(n) +
                              " REG nodes");
    }
    return w;
}

int cmd_build(const Options& o, std::ostream& out, std::ostream& err)
{
    if (!fs::exists(o.case_path)) throw ParseError("no such file: " + o.case_path);
    const MatpowerCase mc = load_case_file(o.case_path);
    for (const std::string& w : mc.warnings) err << "warning: " << w << "\n";

    RegSpec reg;
    for (double v : parse_list(o.reg, "--reg")) {
        if (v != std::floor(v)) throw ValidationError("--reg: bus ids must be integers");
        reg.nodes.push_back(static_cast<int>(v));
    }
    reg.w_max = expand_wmax(o.wmax, reg.nodes.size());
    const LinearRegion region = build_linear_region(mc.network, reg, {.ramp = o.ramp});
    const fs::path p = write_file(o.out, "region.json", region_to_json(region));
    out << "region: " << region.a_eq.rows() << " equality rows, " << region.a_in.rows() << " inequality rows, "
        << region.num_cols() << " columns (" << region.n_w << " w, " << region.n_x << " x) -> " << p.string()
        << "\n";
    return kOk;
}

int cmd_project(const Options& o, std::ostream& out, std::ostream& err)
{
    const LinearRegion region = region_from_json(read_file(o.region_path));
    Vec w_max = region.w_max;
    if (!o.wmax.empty()) w_max = expand_wmax(o.wmax, region.n_w);
    if (w_max.empty()) throw ValidationError("the region has no w_max; pass --wmax");

    PhgConfig cfg;
    cfg.phi_deg = o.phi;
    cfg.eps = o.eps;
    cfg.seed = o.seed;
    cfg.max_iterations = o.max_iterations;

    const auto t0 = std::chrono::steady_clock::now();
    const PhiResult r = phi_run(region, w_max, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const ProjectionInfo info{r.stats, r.iteration_cap_reached, cfg};
    const fs::path p = write_file(o.out, "polytope.json", polytope_to_json(r.polytope, &info));
    out << "facets: " << r.polytope.facets.size() << " (" << r.polytope.count(Provenance::InitialBox)
        << " InitialBox, " << r.polytope.count(Provenance::Discovered) << " Discovered)\n"
        << "lp solves: " << r.stats.lp_solves << "\n"
        << "wall time: " << secs << " s\n"
        << "polytope: " << p.string() << "\n";
    if (r.iteration_cap_reached) {
        err << "warning: iteration cap of " << cfg.max_iterations << " reached; the polytope is partial\n";
        return kIterationCap;
    }
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&)
{
    const LinearRegion region = region_from_json(read_file(o.region_path));
    const Polytope poly = polytope_from_json(read_file(o.polytope_path));
    if (poly.dimension != region.n_w) {
        throw ValidationError("polytope dimension " + std::to_string(poly.dimension) + " does not match region n_w " +
                              std::to_string(region.n_w));
    }
    const Classification c = classify_samples(region, poly, o.samples, o.seed, o.threads);
    const auto audit = facet_support_audit(region, poly);
    write_file(o.out, "report.json", report_to_json(c.report, &audit));
    write_file(o.out, "samples.csv", samples_csv(c.samples));
    out << "E_r: ";
    if (c.report.e_r) out << format_double(*c.report.e_r) << "%";
    else out << "undefined (no samples inside the polytope)";
    out << " (n_SR " << c.report.n_SR << ", n_SA " << c.report.n_SA << ", boundary " << c.report.n_boundary
        << ")\n";
    return kOk;
}

int cmd_fme(const Options& o, std::ostream& out, std::ostream&)
{
    const LinearRegion region = region_from_json(read_file(o.region_path));
    const Polytope poly = fme_project(region);
    write_file(o.out, "fme_polytope.json", polytope_to_json(poly));
    out << "fme facets: " << poly.facets.size() << " (" << poly.count(Provenance::Discovered) << " Discovered)\n";
    if (!o.compare.empty()) {
        const Polytope other = polytope_from_json(read_file(o.compare));
        if (other.dimension != poly.dimension) throw ValidationError("--compare polytope has the wrong dimension");
        const Equivalence eq = regions_equivalent(poly, other, 1e-6);
        out << (eq.equal ? "equal" : "not equal") << ", max_violation " << format_double(eq.max_violation) << "\n";
    }
    return kOk;
}

int cmd_plotdata(const Options& o, std::ostream& out, std::ostream&)
{
    const Polytope poly = polytope_from_json(read_file(o.polytope_path));
    const LinearRegion region = region_from_json(read_file(o.region_path));
    if (poly.dimension != region.n_w) throw ValidationError("polytope and region dimensions differ");
    const std::vector<Vec> verts = enumerate_vertices_2d3d(poly);
    const Classification c = classify_samples(region, poly, o.samples, o.seed, o.threads);
    write_file(o.out, "vertices.csv", vertices_csv(verts));
    write_file(o.out, "plot_samples.csv", samples_csv(c.samples));
    out << "vertices: " << verts.size() << ", samples: " << c.samples.size() << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Projection of linearized power-flow regions onto renewable outputs", "polyproj"};
    app.require_subcommand(1);
    Options o;

    auto* build = app.add_subcommand("build", "Build the linearized region from a case file");
    build->add_option("case", o.case_path, "Case file (.m for MATPOWER, otherwise JSON)")->required();
    build->add_option("--reg", o.reg, "REG bus ids, comma separated")->required();
    build->add_option("--wmax", o.wmax, "REG capacity in p.u., scalar or comma list")->required();
    build->add_flag("--ramp", o.ramp, "Add generator ramp rows");
    build->add_option("--out", o.out, "Output directory");

    auto* project = app.add_subcommand("project", "Project a region onto w");
    project->add_option("region", o.region_path, "Region JSON")->required();
    project->add_option("--wmax", o.wmax, "Override the region's w_max");
    project->add_option("--phi", o.phi, "Maximum tolerated angle in degrees");
    project->add_option("--eps", o.eps, "Displacement tolerance");
    project->add_option("--seed", o.seed, "Seed for exterior point adjustment");
    project->add_option("--max-iter", o.max_iterations, "Iteration cap");
    project->add_option("--out", o.out, "Output directory");

    auto* verify = app.add_subcommand("verify", "Monte Carlo comparison of a polytope with its region");
    verify->add_option("region", o.region_path, "Region JSON")->required();
    verify->add_option("polytope", o.polytope_path, "Polytope JSON")->required();
    verify->add_option("--samples", o.samples, "Sample count");
    verify->add_option("--seed", o.seed, "Sampling seed");
    verify->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    verify->add_option("--out", o.out, "Output directory");

    auto* fme = app.add_subcommand("fme", "Fourier-Motzkin projection of a small region");
    fme->add_option("region", o.region_path, "Region JSON")->required();
    fme->add_option("--compare", o.compare, "Polytope JSON to compare against");
    fme->add_option("--out", o.out, "Output directory");

    auto* plot = app.add_subcommand("plot-data", "Vertex and sample CSVs for 2-D and 3-D plots");
    plot->add_option("polytope", o.polytope_path, "Polytope JSON")->required();
    plot->add_option("region", o.region_path, "Region JSON")->required();
    plot->add_option("--samples", o.samples, "Sample count");
    plot->add_option("--seed", o.seed, "Sampling seed");
    plot->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    plot->add_option("--out", o.out, "Output directory");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (build->parsed()) return cmd_build(o, out, err);
        if (project->parsed()) return cmd_project(o, out, err);
        if (verify->parsed()) return cmd_verify(o, out, err);
        if (fme->parsed()) return cmd_fme(o, out, err);
        if (plot->parsed()) return cmd_plotdata(o, out, err);
    } catch (const SizeGuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kSizeGuard;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

}  // namespace polyproj::cli
