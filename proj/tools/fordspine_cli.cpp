// fordspine: batch driver and query server.
//
// Exit codes: 0 all checks pass, 1 internal error, 2 validation or check
// failure, 3 incomplete enumeration or cutoff too coarse, 64 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fordspine/export.hpp"
#include "fordspine/service.hpp"

namespace fs = std::filesystem;
using namespace fordspine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitUsage = 64;

struct Common {
    std::string fixture;
    std::string scales = "canonical";
    double scale_factor = 1.0;
    double eps = 0.05;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--fixture", c.fixture, "fixture file or name under $FORDSPINE_FIXTURES")->required();
    sub->add_option("--scales", c.scales, "'canonical' or comma separated cusp heights");
    sub->add_option("--scale-factor", c.scale_factor, "enlarge every cusp by this factor (divides heights)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps", c.eps, "horoball diameter cutoff")->check(CLI::PositiveNumber);
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + p.string());
    out << text;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) fail(ErrorKind::InvalidArgument, "cannot read number '" + item + "'");
        out.push_back(x);
    }
    return out;
}

int exit_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::IncompleteOrbit:
    case ErrorKind::EnumerationDiverged:
    case ErrorKind::CutoffTooCoarse:
        return kExitIncomplete;
    case ErrorKind::Internal:
    case ErrorKind::Inconsistency:
        return kExitInternal;
    default:
        return kExitValidation;
    }
}

struct Session {
    ManifoldPresentation m;
    OrbitData od;
    CuspScales scales;
};

Session open_session(const Common& c) {
    Session s;
    s.m = load_presentation(c.fixture);
    s.od = prepare_orbits(s.m, c.eps);
    s.scales = resolve_scales(c.scales, s.od, c.scale_factor);
    return s;
}

void print_violations(const PipelineResult& r) {
    for (const auto& v : r.scale_report.violations)
        std::cerr << "  view " << v.view << " source " << v.source << " entry " << v.entry << ": s*s' = " << v.product
                  << " < " << v.required << "\n";
}

int cmd_compute(const Common& c, const std::string& out_dir) {
    Session s = open_session(c);
    PipelineResult r = run_pipeline(s.m, s.od, s.scales);
    fs::path dir(out_dir);
    write_file(dir / "scales.json", dump(scales_json(r)));
    write_file(dir / "verdict.json", dump(verdict_json(r)));
    if (!r.computed) {
        std::cerr << "scales are not admissible; disjointness violations:\n";
        print_violations(r);
        return kExitValidation;
    }
    for (const auto& T : r.ensemble->cusps)
        write_file(dir / ("cusp" + std::to_string(T.cusp) + "_tessellation.json"), dump(tessellation_json(T)));
    write_file(dir / "complex.json", dump(complex_json(r)));
    write_file(dir / "dual.json", dump(dual_json(r)));
    auto E = extraction_ensemble(s.m, s.od, r);
    write_file(dir / "weighted_points.json",
               dump(weighted_points_json(extract_weighted_points(*E), PointSource{c.fixture, E->scales.heights, c.eps})));

    const Verdict& v = r.verdict;
    std::cout << "cells";
    for (const auto& T : r.ensemble->cusps) std::cout << " " << T.cells.size();
    std::cout << "\nspine V=" << r.complex->vertices.size() << " E=" << r.complex->edges.size()
              << " F=" << r.complex->faces.size() << " chi=" << r.complex->euler_characteristic << "\n"
              << "min systole " << v.min_systole << ", min degree " << v.min_degree << "\n"
              << "CAT(0) " << (v.cat0() ? "pass" : "FAIL") << ", verdict " << (v.pass() ? "pass" : "FAIL") << "\n";
    return v.pass() ? kExitOk : kExitValidation;
}

int cmd_deform(const Common& c, const std::string& grid, const std::string& limit_grid, const std::string& out) {
    Session s = open_session(c);
    PipelineResult r = run_pipeline(s.m, s.od, s.scales);
    if (!r.computed) {
        print_violations(r);
        return kExitValidation;
    }
    std::vector<double> taus = parse_list(grid);
    ProfileReport P = angle_length_profile(*r.ensemble, taus);
    std::vector<LimitReport> limits;
    for (double t : parse_list(limit_grid)) limits.push_back(rescaled_limit(*r.ensemble, t));
    std::string text = dump(deformation_json(P, limits));
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    std::cerr << "lengths decrease: " << (P.lengths_decreasing ? "yes" : "weakly")
              << ", bending angles decrease: " << (P.bends_decreasing ? "yes" : "weakly")
              << ", corner angles increase: " << (P.corners_increasing ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_reconstruct(const std::string& points, const std::string& out_dir) {
    json j = parse_json_text(read_text_file(points), points);
    WeightedPointSet W = parse_weighted_points(j);
    WeightDiagnosis d = validate_weighted_points(W);
    for (const auto& f : d.failures) std::cerr << "  " << f << "\n";
    if (!d.pass()) return kExitValidation;
    Reconstruction R = reconstruct(W);
    std::cout << "reconstructed";
    for (const auto& T : R.ensemble.cusps) std::cout << " " << T.cells.size();
    std::cout << " cells, " << R.dropped.size() << " dominated points dropped, " << R.equivalent_pairings.size()
              << " equivalent pairings\n";
    if (!out_dir.empty())
        for (const auto& T : R.ensemble.cusps)
            write_file(fs::path(out_dir) / ("cusp" + std::to_string(T.cusp) + "_tessellation.json"),
                       dump(tessellation_json(T)));
    auto src = parse_point_source(j);
    if (!src) return kExitOk;
    ManifoldPresentation m = load_presentation(src->fixture);
    OrbitData od = prepare_orbits(m, src->eps);
    CuspScales sc;
    sc.heights = src->heights;
    PipelineResult r = run_pipeline(m, od, sc);
    if (!r.computed) fail(ErrorKind::ValidationFailed, "source heights are not admissible");
    RoundTripReport rt = round_trip_report(*r.ensemble, R);
    std::cout << "round trip: " << (rt.combinatorial_match ? "pass" : "FAIL") << " (vertex deviation "
              << rt.max_vertex_deviation << ", radius deviation " << rt.max_radius_deviation << ")\n";
    if (!rt.mismatch.empty()) std::cout << "  " << rt.mismatch << "\n";
    return rt.combinatorial_match && rt.max_vertex_deviation < 1e-9 ? kExitOk : kExitValidation;
}

int cmd_check(const std::string& path) {
    ComplexFileCheck c = check_complex_json(parse_json_text(read_text_file(path), path));
    std::cout << dump(complex_check_json(c));
    if (!c.pass()) {
        for (const auto& msg : c.messages) std::cerr << msg << "\n";
        if (c.failing_link >= 0) {
            std::cerr << "witness cycle (link edges):";
            for (int e : c.witness) std::cerr << " " << e;
            std::cerr << "\n";
        }
    }
    return c.pass() ? kExitOk : kExitValidation;
}

int cmd_export(const Common& c, const std::string& svg_dir) {
    Session s = open_session(c);
    PipelineResult r = run_pipeline(s.m, s.od, s.scales);
    if (!r.computed) {
        print_violations(r);
        return kExitValidation;
    }
    for (const auto& T : r.ensemble->cusps) {
        fs::path p = fs::path(svg_dir) / ("cusp" + std::to_string(T.cusp) + ".svg");
        write_file(p, tessellation_svg(T));
        std::cout << p.string() << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const Common& c, double range, int samples, const std::string& out) {
    Session s = open_session(c);
    auto v = sweep_family(s.m, s.od, range, samples);
    SweepSummary S = summarize_sweep(v);
    std::string text = dump(sweep_json(v, S));
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    std::cerr << S.generic_types.size() << " types on open intervals, " << S.wall_types.size()
              << " isolated wall types, " << S.transitions << " transitions\n";
    return kExitOk;
}

int cmd_serve(const Common& c, const std::string& host, int port) {
    Session s = open_session(c);
    Service svc(std::move(s.m), std::move(s.od));
    std::cerr << "serving on " << host << ":" << port << " (revision " << svc.revision() << ")\n";
    return svc.serve(host, port) ? kExitOk : kExitInternal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ford domains, piecewise-Euclidean spines and their checks"};
    app.require_subcommand(1);

    Common common;
    std::string out_dir = "out", tau_grid = "0,0.5,1,2,4", limit_grid = "10,100,1000", out_file, points,
                complex_path, svg_dir = "out", host = "127.0.0.1";
    int port = 8080, samples = 21;
    double range = 4.0;

    auto* compute = app.add_subcommand("compute", "tessellations, complex and verdict at the given scales");
    add_common(compute, common);
    compute->add_option("--out", out_dir, "output directory");

    auto* deform = app.add_subcommand("deform", "angle and length profile along the Wildberger family");
    add_common(deform, common);
    deform->add_option("--tau-grid", tau_grid, "comma separated tau values starting at 0");
    deform->add_option("--limit-taus", limit_grid, "tau values for the rescaled limit comparison");
    deform->add_option("--out", out_file, "report file (stdout when absent)");

    auto* recon = app.add_subcommand("reconstruct", "rebuild the tessellations from weighted points");
    recon->add_option("--points", points, "weighted-point file")->required()->check(CLI::ExistingFile);
    recon->add_option("--out", out_file, "directory for the rebuilt tessellations");

    auto* check = app.add_subcommand("check", "re-verify a complex file");
    check->add_option("--complex", complex_path, "complex file")->required()->check(CLI::ExistingFile);

    auto* exp = app.add_subcommand("export", "SVG pictures of the cusp tori");
    add_common(exp, common);
    exp->add_option("--svg", svg_dir, "output directory for the SVG files");

    auto* sweep = app.add_subcommand("sweep", "combinatorial types along a two-cusp scale family");
    add_common(sweep, common);
    sweep->add_option("--range", range, "ratios run over [1/range, range]")->check(CLI::Range(1.0001, 1e6));
    sweep->add_option("--samples", samples, "number of log-spaced ratios")->check(CLI::Range(2, 100000));
    sweep->add_option("--out", out_file, "report file (stdout when absent)");

    auto* serve = app.add_subcommand("serve", "HTTP query service for one fixture");
    add_common(serve, common);
    serve->add_option("--port", port, "port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", host, "bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*compute) return cmd_compute(common, out_dir);
        if (*deform) return cmd_deform(common, tau_grid, limit_grid, out_file);
        if (*recon) return cmd_reconstruct(points, out_file);
        if (*check) return cmd_check(complex_path);
        if (*exp) return cmd_export(common, svg_dir);
        if (*sweep) return cmd_sweep(common, range, samples, out_file);
        if (*serve) return cmd_serve(common, host, port);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::InvalidArgument && std::string(e.what()).find("fixture not found") == std::string::npos)
            return kExitUsage;
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
