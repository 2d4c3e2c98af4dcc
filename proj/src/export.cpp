#include "fordspine/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace fordspine {

namespace {

json pt(cplx z) { return json::array({z.real(), z.imag()}); }

cplx read_pt(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(ErrorKind::Parse, "expected a point [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// JSON has no infinity; an absent bound is written as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json constraint_json(const ScaleConstraint& c) {
    return {{"view", c.view}, {"source", c.source}, {"entry", c.entry}, {"required", c.required},
            {"product", c.product}};
}

json occurrence_json(const VertexOccurrence& o) { return {{"cusp", o.cusp}, {"vertex", o.vertex}}; }

// Cells glued by a pairing share a class; the class id is the smaller flat key.
int partner_class(const PolygonCell& c) {
    int self = c.cusp * 100000 + c.index;
    if (!c.pairing) return self;
    return std::min(self, c.pairing->cusp * 100000 + c.pairing->cell);
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s(buf);
    return s == "-0" ? "0" : s;
}

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorKind::Parse, std::string("missing field '") + key + "'");
    return *it;
}

void expect_schema(const json& j, const char* tag) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != tag)
        fail(ErrorKind::Parse, std::string("expected a document with schema ") + tag);
}

} // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, what + ": " + e.what());
    }
}

json tessellation_json(const FordTessellation& T) {
    json cells = json::array();
    for (const auto& c : T.cells) {
        json verts = json::array(), sides = json::array(), heights = json::array(), angles = json::array();
        for (std::size_t k = 0; k < c.vertices.size(); ++k) {
            verts.push_back(pt(c.vertices[k]));
            heights.push_back(std::sqrt(std::max(c.label.power(c.vertices[k]), 0.0)));
            angles.push_back(c.corner_angle(k));
        }
        for (std::size_t k = 0; k < c.sides.size(); ++k) {
            const auto& s = c.sides[k];
            sides.push_back({{"neighbor", s.neighbor},
                             {"shift", json::array({s.shift.m, s.shift.n})},
                             {"edge", k < c.side_edge.size() ? c.side_edge[k] : -1}});
        }
        json cell = {{"index", c.index},
                     {"label", {{"center", pt(c.label.center)}, {"radius", c.label.radius}}},
                     {"source_cusp", c.source_cusp},
                     {"orbit_entry", c.orbit_entry},
                     {"vertices", verts},
                     {"vertex_heights", heights},
                     {"corner_angles", angles},
                     {"corner_vertex", c.corner_vertex},
                     {"sides", sides},
                     {"area", c.area()},
                     {"partner_class", partner_class(c)}};
        if (c.pairing) {
            const auto& p = *c.pairing;
            cell["pairing"] = {{"cusp", p.cusp},
                               {"cell", p.cell},
                               {"offset", pt(p.map.offset)},
                               {"mu", pt(p.map.mu)},
                               {"corner_map", p.corner_map},
                               {"residual", p.residual}};
        } else {
            cell["pairing"] = nullptr;
        }
        cells.push_back(std::move(cell));
    }
    json edges = json::array();
    for (const auto& e : T.edges)
        edges.push_back({{"cell_a", e.cell_a},
                         {"side_a", e.side_a},
                         {"cell_b", e.cell_b},
                         {"side_b", e.side_b},
                         {"shift_b", json::array({e.shift_b.m, e.shift_b.n})},
                         {"start", pt(e.start)},
                         {"end", pt(e.end)}});
    json verts = json::array();
    for (const auto& v : T.vertices) {
        json corners = json::array();
        for (const auto& c : v.corners) corners.push_back(json::array({c.cell, c.corner}));
        verts.push_back({{"position", pt(v.position)}, {"height", v.height}, {"generic", v.generic},
                         {"corners", corners}});
    }
    json dominated = json::array();
    for (const auto& d : T.dominated)
        dominated.push_back({{"center", pt(d.label.center)}, {"radius", d.label.radius},
                             {"source_cusp", d.source_cusp}, {"orbit_entry", d.orbit_entry}});
    return {{"schema", schema::kTessellation},
            {"cusp", T.cusp},
            {"height", T.scale},
            {"lattice", json::array({pt(T.lattice.l1()), pt(T.lattice.l2())})},
            {"torus_area", T.lattice.area()},
            {"area_residual", std::abs(T.covered_area() - T.lattice.area())},
            {"euler_characteristic", T.euler_characteristic()},
            {"cells", cells},
            {"edges", edges},
            {"vertices", verts},
            {"dominated", dominated}};
}

json complex_json(const PipelineResult& r) {
    if (!r.computed || !r.complex) fail(ErrorKind::ValidationFailed, "no complex at these scales");
    const SpineComplex& S = *r.complex;
    json vertices = json::array();
    for (const auto& v : S.vertices) {
        json occ = json::array();
        for (const auto& o : v.occurrences) occ.push_back(occurrence_json(o));
        vertices.push_back({{"occurrences", occ}});
    }
    json edges = json::array();
    for (const auto& e : S.edges) {
        json occ = json::array();
        for (const auto& o : e.occurrences) occ.push_back({{"cusp", o.cusp}, {"edge", o.edge}});
        edges.push_back({{"degree", e.degree}, {"cone_angle", e.cone_angle}, {"length", e.length},
                         {"occurrences", occ}});
    }
    json faces = json::array();
    for (const auto& f : S.faces)
        faces.push_back(json::array({json::array({f.a.cusp, f.a.cell}), json::array({f.b.cusp, f.b.cell})}));

    json links = json::array();
    for (std::size_t i = 0; i < r.links.size(); ++i) {
        const LinkGraph& L = r.links[i];
        json le = json::array(), circles = json::array();
        for (const auto& e : L.edges) le.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
        for (const auto& c : L.circles)
            circles.push_back({{"occurrence", occurrence_json(c.occurrence)}, {"edges", c.edges}, {"length", c.length}});
        links.push_back({{"vertex", L.vertex},
                         {"node_count", L.node_count},
                         {"edges", le},
                         {"circles", circles},
                         {"systole", r.link_checks[i].systole},
                         {"witness", r.link_checks[i].witness},
                         {"large", r.link_checks[i].pass},
                         {"capped_euler_characteristic", r.capped[i].euler_characteristic}});
    }

    json duals = json::array();
    for (std::size_t i = 0; i < r.polar.size(); ++i) {
        const PolarDualData& D = r.polar[i];
        const RivinReport& R = r.rivin[i];
        json de = json::array();
        for (const auto& e : D.edges)
            de.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}, {"ideal", json::array({e.ideal_a, e.ideal_b})}});
        duals.push_back({{"vertex_class", r.duals[i].vertex_class},
                         {"node_count", D.node_count},
                         {"edges", de},
                         {"face_cycles", D.face_cycles},
                         {"faces", D.faces},
                         {"rivin",
                          {{"condition1", R.condition1},
                           {"condition2", R.condition2},
                           {"condition3", R.condition3},
                           {"min_weight", R.min_weight},
                           {"max_weight", R.max_weight},
                           {"max_face_error", R.max_face_error},
                           {"min_nonface_sum", finite_or_null(R.min_nonface_sum)},
                           {"witness", R.witness},
                           {"circuits_checked", R.circuits_checked}}}});
    }
    return {{"schema", schema::kComplex},
            {"euler_characteristic", S.euler_characteristic},
            {"vertices", vertices},
            {"edges", edges},
            {"faces", faces},
            {"links", links},
            {"duals", duals}};
}

json verdict_json(const PipelineResult& r) {
    const Verdict& v = r.verdict;
    json j = {{"schema", schema::kVerdict},
              {"heights", r.scales.heights},
              {"computed", r.computed},
              {"scales_admissible", v.scales_admissible},
              {"pairings_ok", v.pairings_ok},
              {"edge_cycles_ok", v.edge_cycles_ok},
              {"euler_zero", v.euler_zero},
              {"degrees_ok", v.degrees_ok},
              {"links_large", v.links_large},
              {"caps_ok", v.caps_ok},
              {"rivin_ok", v.rivin_ok},
              {"cat0", v.cat0()},
              {"pass", v.pass()}};
    if (r.computed) {
        j["min_systole"] = v.min_systole;
        j["min_degree"] = v.min_degree;
        j["max_holonomy_error"] = v.max_holonomy_error;
        j["max_angle_sum_error"] = v.max_angle_sum_error;
        j["max_pairing_residual"] = r.pairing.max_residual;
        j["max_radius_gap"] = r.pairing.max_radius_gap;
    }
    return j;
}

json scales_json(const PipelineResult& r) {
    json intervals = json::array(), violations = json::array(), tangencies = json::array();
    for (const auto& a : r.scale_report.admissible)
        intervals.push_back({{"lower", a.lower}, {"upper", finite_or_null(a.upper)}});
    for (const auto& c : r.scale_report.violations) violations.push_back(constraint_json(c));
    for (const auto& c : r.scale_report.tangencies) tangencies.push_back(constraint_json(c));
    return {{"schema", schema::kScales},
            {"heights", r.scales.heights},
            {"admissible", r.scale_report.is_admissible()},
            {"intervals", intervals},
            {"violations", violations},
            {"tangencies", tangencies}};
}

json dual_json(const PipelineResult& r) {
    if (!r.computed) fail(ErrorKind::ValidationFailed, "no dual cells at these scales");
    json cells = json::array();
    for (std::size_t i = 0; i < r.duals.size(); ++i) {
        const IdealDualCell& X = r.duals[i];
        json pts = json::array();
        for (const auto& p : X.parabolic_points) pts.push_back(p.is_infinite() ? json("inf") : pt(p.value()));
        json sections = json::array();
        for (const auto& s : X.cross_sections) {
            json poly = json::array();
            for (cplx z : s.polygon) poly.push_back(pt(z));
            sections.push_back({{"occurrence", occurrence_json(s.occurrence)}, {"polygon", poly}});
        }
        cells.push_back({{"vertex_class", X.vertex_class},
                         {"chart", occurrence_json(X.chart)},
                         {"position", pt(X.position)},
                         {"height", X.height},
                         {"parabolic_points", pts},
                         {"cross_sections", sections},
                         {"faces", r.polar[i].faces},
                         {"edge_count", r.polar[i].edges.size()},
                         {"rivin_pass", r.rivin[i].pass()}});
    }
    return {{"schema", schema::kDual}, {"cells", cells}};
}

json deformation_json(const ProfileReport& P, const std::vector<LimitReport>& limits) {
    auto series = [](const std::vector<Series>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back({{"key", s.key}, {"values", s.values}, {"limit", s.limit}});
        return a;
    };
    json lim = json::array();
    for (const auto& l : limits)
        lim.push_back({{"tau", l.tau}, {"length_deviation", l.length_deviation}, {"angle_deviation", l.angle_deviation}});
    return {{"schema", schema::kDeformation},
            {"taus", P.taus},
            {"lengths_decreasing", P.lengths_decreasing},
            {"bends_decreasing", P.bends_decreasing},
            {"corners_increasing", P.corners_increasing},
            {"lengths", series(P.lengths)},
            {"bends", series(P.bends)},
            {"corners", series(P.corners)},
            {"rescaled_limit", lim}};
}

json sweep_json(const std::vector<SweepSample>& samples, const SweepSummary& summary) {
    json a = json::array();
    for (const auto& s : samples) a.push_back({{"ratio", s.ratio}, {"heights", s.scales.heights}, {"type", s.type}});
    return {{"schema", schema::kSweep},
            {"samples", a},
            {"generic_types", summary.generic_types},
            {"wall_types", summary.wall_types},
            {"transitions", summary.transitions}};
}

json weighted_points_json(const WeightedPointSet& W, const std::optional<PointSource>& source) {
    json cusps = json::array();
    for (const auto& c : W.cusps) {
        json pts = json::array();
        for (const auto& p : c.points) pts.push_back({{"p", pt(p.p)}, {"w", p.w}});
        cusps.push_back({{"lattice", json::array({pt(c.lattice.l1()), pt(c.lattice.l2())})}, {"points", pts}});
    }
    json j = {{"schema", schema::kWeightedPoints}, {"cusps", cusps}};
    if (source) j["source"] = {{"fixture", source->fixture}, {"heights", source->heights}, {"eps", source->eps}};
    return j;
}

WeightedPointSet parse_weighted_points(const json& j) {
    expect_schema(j, schema::kWeightedPoints);
    WeightedPointSet W;
    const json& cusps = field(j, "cusps");
    if (!cusps.is_array() || cusps.empty()) fail(ErrorKind::Parse, "cusps must be a nonempty array");
    for (const auto& c : cusps) {
        const json& lat = field(c, "lattice");
        if (!lat.is_array() || lat.size() != 2) fail(ErrorKind::Parse, "lattice needs two periods");
        WeightedCusp wc;
        cplx l1 = read_pt(lat[0]), l2 = read_pt(lat[1]);
        if (std::abs(l1.real() * l2.imag() - l1.imag() * l2.real()) < 1e-12)
            fail(ErrorKind::Parse, "lattice periods are degenerate");
        wc.lattice = Lattice(l1, l2);
        for (const auto& p : field(c, "points")) {
            const json& w = field(p, "w");
            if (!w.is_number()) fail(ErrorKind::Parse, "weight must be a number");
            wc.points.push_back({read_pt(field(p, "p")), w.get<double>()});
        }
        W.cusps.push_back(std::move(wc));
    }
    return W;
}

std::optional<PointSource> parse_point_source(const json& j) {
    if (!j.contains("source") || j["source"].is_null()) return std::nullopt;
    try {
        const json& s = j["source"];
        PointSource p;
        p.fixture = s.at("fixture").get<std::string>();
        p.heights = s.at("heights").get<std::vector<double>>();
        p.eps = s.value("eps", 0.05);
        return p;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("point source: ") + e.what());
    }
}

ComplexFileCheck check_complex_json(const json& j) {
    expect_schema(j, schema::kComplex);
    ComplexFileCheck out;
    try {
        for (const auto& e : field(j, "edges")) {
            int k = e.at("degree").get<int>();
            double cone = e.at("cone_angle").get<double>();
            if (k < 3 || std::abs(cone - k * std::numbers::pi) > 1e-12) {
                out.degrees_ok = false;
                out.messages.push_back("edge of degree " + std::to_string(k) + " with cone angle " + num(cone));
            }
        }
        out.min_systole = std::numeric_limits<double>::infinity();
        for (const auto& l : field(j, "links")) {
            LinkGraph L;
            L.vertex = l.at("vertex").get<int>();
            L.node_count = l.at("node_count").get<int>();
            for (const auto& e : l.at("edges")) {
                int u = e.at("u").get<int>(), v = e.at("v").get<int>();
                if (u < 0 || v < 0 || u >= L.node_count || v >= L.node_count)
                    fail(ErrorKind::MalformedComplex, "link edge endpoint out of range");
                L.edges.push_back({u, v, e.at("length").get<double>(), {}});
            }
            for (const auto& c : l.at("circles")) {
                CuspCircle cc;
                cc.edges = c.at("edges").get<std::vector<int>>();
                for (int e : cc.edges)
                    if (e < 0 || e >= static_cast<int>(L.edges.size()))
                        fail(ErrorKind::MalformedComplex, "cusp circle edge out of range");
                cc.length = c.at("length").get<double>();
                L.circles.push_back(std::move(cc));
            }
            LinkCheck lc = check_link_large(L);
            if (lc.systole < out.min_systole) out.min_systole = lc.systole;
            if (!lc.pass && out.links_large) {
                out.links_large = false;
                out.failing_link = L.vertex;
                out.witness = lc.witness;
                out.messages.push_back("link of vertex " + std::to_string(L.vertex) + " has a cycle of length " +
                                       num(lc.systole) + " < 2pi");
            }
            try {
                if (completed_link(L).euler_characteristic != 2) {
                    out.caps_ok = false;
                    out.messages.push_back("capped link of vertex " + std::to_string(L.vertex) + " is not a sphere");
                }
            } catch (const Error& e) {
                out.caps_ok = false;
                out.messages.push_back(e.what());
            }
        }
        for (const auto& d : field(j, "duals")) {
            PolarDualData D;
            D.node_count = d.at("node_count").get<int>();
            for (const auto& e : d.at("edges")) {
                DualEdge de;
                de.u = e.at("u").get<int>();
                de.v = e.at("v").get<int>();
                de.weight = e.at("weight").get<double>();
                if (de.u < 0 || de.v < 0 || de.u >= D.node_count || de.v >= D.node_count)
                    fail(ErrorKind::MalformedComplex, "dual edge endpoint out of range");
                D.edges.push_back(de);
            }
            D.face_cycles = d.at("face_cycles").get<std::vector<std::vector<int>>>();
            for (const auto& fc : D.face_cycles)
                for (int e : fc)
                    if (e < 0 || e >= static_cast<int>(D.edges.size()))
                        fail(ErrorKind::MalformedComplex, "face cycle edge out of range");
            RivinReport R = rivin_check(D);
            if (!R.pass()) {
                out.rivin_ok = false;
                out.messages.push_back("Rivin conditions fail on dual cell " + std::to_string(d.value("vertex_class", -1)));
            }
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("complex file: ") + e.what());
    }
    return out;
}

json complex_check_json(const ComplexFileCheck& c) {
    return {{"pass", c.pass()},
            {"degrees_ok", c.degrees_ok},
            {"links_large", c.links_large},
            {"caps_ok", c.caps_ok},
            {"rivin_ok", c.rivin_ok},
            {"min_systole", finite_or_null(c.min_systole)},
            {"failing_link", c.failing_link},
            {"witness", c.witness},
            {"messages", c.messages}};
}

std::string tessellation_svg(const FordTessellation& T) {
    const cplx l1 = T.lattice.l1(), l2 = T.lattice.l2();
    const cplx corners[4] = {0.0, l1, l1 + l2, l2};
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    for (cplx c : corners) {
        x0 = std::min(x0, c.real());
        x1 = std::max(x1, c.real());
        y0 = std::min(y0, c.imag());
        y1 = std::max(y1, c.imag());
    }
    const double pad = 0.02 * std::max(x1 - x0, y1 - y0);
    // flip y so the picture has the usual orientation
    auto P = [](cplx z) { return num(z.real()) + "," + num(-z.imag()); };

    std::map<int, int> color_of;
    for (const auto& c : T.cells) color_of.emplace(partner_class(c), 0);
    int next = 0;
    for (auto& [k, v] : color_of) v = next++;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0 - pad) << " " << num(-y1 - pad) << " "
      << num(x1 - x0 + 2 * pad) << " " << num(y1 - y0 + 2 * pad) << "\">\n";
    s << "<defs><clipPath id=\"torus\"><polygon points=\"";
    for (cplx c : corners) s << P(c) << " ";
    s << "\"/></clipPath></defs>\n";
    s << "<g clip-path=\"url(#torus)\" stroke=\"#222\" stroke-width=\"" << num(0.004 * (x1 - x0)) << "\">\n";
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
            cplx shift = T.lattice.vector({m, n});
            for (const auto& c : T.cells) {
                s << "<polygon data-cell=\"" << c.index << "\" fill=\""
                  << kPalette[color_of[partner_class(c)] % 10] << "\" points=\"";
                for (cplx v : c.vertices) s << P(v + shift) << " ";
                s << "\"/>\n";
            }
        }
    s << "</g>\n<polygon fill=\"none\" stroke=\"#000\" stroke-dasharray=\"0.01\" stroke-width=\""
      << num(0.003 * (x1 - x0)) << "\" points=\"";
    for (cplx c : corners) s << P(c) << " ";
    s << "\"/>\n</svg>\n";
    return s.str();
}

} // namespace fordspine
