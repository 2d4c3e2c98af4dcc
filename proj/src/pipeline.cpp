#include "fordspine/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace fordspine {

OrbitData prepare_orbits(const ManifoldPresentation& m, double eps, const EnumerationOptions& options) {
    OrbitData d;
    d.eps = eps;
    d.orbits = enumerate_all_horoballs(m, eps, options);
    d.family = canonical_family(m, d.orbits);
    return d;
}

PipelineResult run_pipeline(const ManifoldPresentation& m, const OrbitData& od, const CuspScales& scales) {
    PipelineResult r;
    r.scales = scales;
    r.scale_report = validate_scales(m, od.orbits, scales);
    r.verdict.scales_admissible = r.scale_report.is_admissible();
    if (!r.verdict.scales_admissible) return r;

    auto E = std::make_shared<FordEnsemble>(build_ensemble(m, od.orbits, scales));
    r.ensemble = E;
    r.pairing = check_pairings(*E);
    r.verdict.pairings_ok = r.pairing.involutive && r.pairing.max_radius_gap < 1e-9 && r.pairing.max_residual < 1e-9;

    r.cycles = edge_cycles(*E);
    r.verdict.edge_cycles_ok = true;
    for (const auto& c : r.cycles) {
        r.verdict.max_holonomy_error = std::max(r.verdict.max_holonomy_error, c.holonomy_error);
        r.verdict.max_angle_sum_error =
            std::max(r.verdict.max_angle_sum_error, std::abs(c.angle_sum - 2.0 * std::numbers::pi));
    }
    r.verdict.edge_cycles_ok = r.verdict.max_holonomy_error < 1e-8 && r.verdict.max_angle_sum_error < 1e-9;

    r.complex = assemble(E);
    const SpineComplex& S = *r.complex;
    r.verdict.euler_zero = S.euler_characteristic == 0;
    r.verdict.min_degree = std::numeric_limits<int>::max();
    r.verdict.degrees_ok = true;
    for (const auto& e : S.edges) {
        r.verdict.min_degree = std::min(r.verdict.min_degree, e.degree);
        if (e.degree < 3 || e.cone_angle != e.degree * std::numbers::pi) r.verdict.degrees_ok = false;
    }

    r.verdict.links_large = true;
    r.verdict.caps_ok = true;
    r.verdict.min_systole = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < S.vertices.size(); ++v) {
        r.links.push_back(vertex_link(S, static_cast<int>(v)));
        r.link_checks.push_back(check_link_large(r.links.back()));
        r.capped.push_back(completed_link(r.links.back()));
        r.verdict.links_large = r.verdict.links_large && r.link_checks.back().pass;
        r.verdict.caps_ok = r.verdict.caps_ok && r.capped.back().euler_characteristic == 2;
        r.verdict.min_systole = std::min(r.verdict.min_systole, r.link_checks.back().systole);
    }

    r.duals = dual_cells(*E);
    r.verdict.rivin_ok = true;
    for (const auto& X : r.duals) {
        r.polar.push_back(polar_dual(X));
        r.rivin.push_back(rivin_check(r.polar.back()));
        r.verdict.rivin_ok = r.verdict.rivin_ok && r.rivin.back().pass();
    }
    r.computed = true;
    return r;
}

CuspScales resolve_scales(const std::string& text, const OrbitData& od, double size_factor) {
    if (!(size_factor > 0.0)) fail(ErrorKind::InvalidArgument, "size factor must be positive");
    CuspScales s;
    if (text.empty() || text == "canonical") {
        s = od.family.scales;
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                double h = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                s.heights.push_back(h);
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidArgument, "cannot read scale '" + item + "'");
            }
        }
        if (s.heights.size() != od.orbits.size())
            fail(ErrorKind::InvalidArgument, "expected one scale per cusp");
    }
    return s.scaled(1.0 / size_factor);
}

std::shared_ptr<const FordEnsemble> extraction_ensemble(const ManifoldPresentation& m, const OrbitData& od,
                                                        const PipelineResult& r) {
    if (!r.computed) fail(ErrorKind::ValidationFailed, "no tessellation at these scales");
    bool strict = true;
    for (const auto& T : r.ensemble->cusps)
        for (const auto& c : T.cells) strict = strict && c.label.radius < 1.0;
    if (strict) return r.ensemble;
    return std::make_shared<FordEnsemble>(build_ensemble(m, od.orbits, r.scales.scaled(kStrictHeightFactor)));
}

std::string combinatorial_type(const FordEnsemble& E) {
    std::ostringstream ss;
    for (const auto& T : E.cusps) {
        std::vector<int> sides;
        for (const auto& c : T.cells) sides.push_back(static_cast<int>(c.vertices.size()));
        std::sort(sides.begin(), sides.end());
        ss << "cusp" << T.cusp << "[";
        for (int n : sides) ss << n << ",";
        ss << "E" << T.edges.size() << "V" << T.vertices.size() << "]";
    }
    FordEnsemble copy = E;
    SpineComplex S = assemble(std::make_shared<const FordEnsemble>(std::move(copy)));
    std::vector<int> degrees;
    for (const auto& e : S.edges) degrees.push_back(e.degree);
    std::sort(degrees.begin(), degrees.end());
    ss << "spine[V" << S.vertices.size() << "E" << S.edges.size() << "F" << S.faces.size() << "deg";
    for (int d : degrees) ss << d << ",";
    ss << "]";
    return ss.str();
}

CuspScales maximal_admissible(const OrbitData& od, const std::vector<double>& q) {
    auto D = tangency_bounds(od.orbits);
    const std::size_t p = od.orbits.size();
    if (q.size() != p) fail(ErrorKind::InvalidArgument, "expected one proportion per cusp");
    double t = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = i; k < p; ++k) {
            double need = std::isnan(D[i][k]) ? od.eps : D[i][k];
            t = std::max(t, std::sqrt(need / (q[i] * q[k])));
        }
    CuspScales s;
    for (double x : q) s.heights.push_back(t * x);
    return s;
}

std::vector<SweepSample> sweep_family(const ManifoldPresentation& m, const OrbitData& od, double range, int n) {
    if (od.orbits.size() != 2) fail(ErrorKind::InvalidArgument, "the sweep needs exactly two cusps");
    if (n < 2 || !(range > 1.0)) fail(ErrorKind::InvalidArgument, "need n >= 2 samples and range > 1");
    std::vector<SweepSample> out;
    const double lo = -std::log(range), hi = std::log(range);
    for (int j = 0; j < n; ++j) {
        double rho = std::exp(lo + (hi - lo) * j / (n - 1));
        SweepSample s;
        s.ratio = rho;
        s.scales = maximal_admissible(od, {std::sqrt(rho), 1.0 / std::sqrt(rho)});
        FordEnsemble E = build_ensemble(m, od.orbits, s.scales);
        s.type = combinatorial_type(E);
        out.push_back(std::move(s));
    }
    return out;
}

SweepSummary summarize_sweep(const std::vector<SweepSample>& samples) {
    SweepSummary out;
    std::string last;
    auto add = [](std::vector<std::string>& v, const std::string& t) {
        if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
    };
    const std::size_t n = samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        const SweepSample& s = samples[i];
        bool persists = (i > 0 && samples[i - 1].type == s.type) || (i + 1 < n && samples[i + 1].type == s.type);
        if (!persists) {
            add(out.wall_types, s.type);
            continue;
        }
        add(out.generic_types, s.type);
        if (!last.empty() && last != s.type) ++out.transitions;
        last = s.type;
    }
    return out;
}

} // namespace fordspine
