#include "fordspine/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace fordspine {

std::size_t FordEnsemble::cell_count() const {
    std::size_t n = 0;
    for (const auto& t : cusps) n += t.cells.size();
    return n;
}

FordEnsemble build_ensemble(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits,
                            const CuspScales& scales) {
    FordEnsemble E;
    E.scales = scales;
    std::vector<std::future<FordTessellation>> jobs;
    for (const auto& o : orbits)
        jobs.push_back(std::async(std::launch::async, [&m, &o, &scales] { return build_tessellation(m, o, scales); }));
    for (auto& j : jobs) E.cusps.push_back(j.get());
    match_polygons(E, m, orbits);
    return E;
}

double congruence_residual(const PolygonCell& a, const PolygonCell& b, const PlanarIsometry& iso,
                           std::vector<int>* corner_map) {
    const std::size_t n = a.vertices.size();
    if (b.vertices.size() != n) return std::numeric_limits<double>::infinity();
    std::vector<int> cm(n, -1);
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx y = iso(a.vertices[k]);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            double d = std::abs(b.vertices[t] - y);
            if (d < best) {
                best = d;
                cm[k] = static_cast<int>(t);
            }
        }
        residual = std::max(residual, best);
    }
    const int ni = static_cast<int>(n);
    for (std::size_t k = 0; k < n; ++k)
        if (cm[(k + 1) % n] != (cm[k] - 1 + ni) % ni) return std::numeric_limits<double>::infinity();
    if (corner_map) *corner_map = std::move(cm);
    return residual;
}

void match_polygons(FordEnsemble& E, const ManifoldPresentation& /*m*/, const std::vector<HoroballOrbit>& orbits) {
    for (auto& T : E.cusps) {
        for (auto& A : T.cells) {
            if (A.orbit_entry < 0) fail(ErrorKind::PairingFailure, "cell without an orbit witness");
            const OrbitEntry& e = orbits.at(static_cast<std::size_t>(T.cusp)).entries.at(static_cast<std::size_t>(A.orbit_entry));
            const int k = e.source_cusp;
            const FordTessellation& Tk = E.cusps.at(static_cast<std::size_t>(k));
            const MobiusTransform& W = e.witness;
            cplx Q = (-W.d() / W.c()) / E.scales.heights.at(static_cast<std::size_t>(k));
            const PolygonCell* B = nullptr;
            for (const auto& cand : Tk.cells) {
                if (Tk.lattice.distance_mod(cand.label.center, Q) > 1e-7) continue;
                if (std::abs(cand.label.radius - A.label.radius) > 1e-9) {
                    std::ostringstream ss;
                    ss << "cell " << A.index << " of cusp " << T.cusp << " meets a partner wall of radius "
                       << cand.label.radius << " instead of " << A.label.radius;
                    fail(ErrorKind::PairingFailure, ss.str());
                }
                B = &cand;
                break;
            }
            if (!B) {
                std::ostringstream ss;
                ss << "no cell of cusp " << k << " carries the partner of cell " << A.index << " of cusp " << T.cusp;
                fail(ErrorKind::PairingFailure, ss.str());
            }
            cplx mu = -std::conj(W.c()) / W.c();
            mu /= std::abs(mu);
            PlanarIsometry iso{B->label.center - mu * std::conj(A.label.center), mu};
            CellPairing p;
            p.cusp = k;
            p.cell = B->index;
            p.map = iso;
            p.residual = congruence_residual(A, *B, iso, &p.corner_map);
            if (!(p.residual <= 1e-6)) {
                std::ostringstream ss;
                ss << "cell " << A.index << " of cusp " << T.cusp << " is not congruent to its partner (residual "
                   << p.residual << ")";
                fail(ErrorKind::CongruenceFailure, ss.str());
            }
            A.pairing = std::move(p);
        }
    }
    PairingCheck chk = check_pairings(E);
    if (!chk.involutive) fail(ErrorKind::PairingFailure, "pairing is not an involution");
}

PairingCheck check_pairings(const FordEnsemble& E) {
    PairingCheck out;
    for (const auto& T : E.cusps)
        for (const auto& A : T.cells) {
            if (!A.pairing) {
                out.involutive = false;
                continue;
            }
            const auto& p = *A.pairing;
            const PolygonCell& B = E.cell(p.cusp, p.cell);
            out.max_radius_gap = std::max(out.max_radius_gap, std::abs(A.label.radius - B.label.radius));
            out.max_residual = std::max(out.max_residual, p.residual);
            if (!B.pairing || B.pairing->cusp != A.cusp || B.pairing->cell != A.index || (&A == &B)) {
                out.involutive = false;
                continue;
            }
            for (cplx v : A.vertices)
                out.max_involution_error = std::max(out.max_involution_error, std::abs(B.pairing->map(p.map(v)) - v));
        }
    if (out.max_involution_error > 1e-9) out.involutive = false;
    return out;
}

double ford_dihedral_angle(const FordTessellation& T, int cell, int side, double tau) {
    const PolygonCell& A = T.cells.at(static_cast<std::size_t>(cell));
    const CellSide& cs = A.sides.at(static_cast<std::size_t>(side));
    const PolygonCell& B = T.cells.at(static_cast<std::size_t>(cs.neighbor));
    cplx pb = B.label.center + T.lattice.vector(cs.shift);
    const std::size_t n = A.vertices.size();
    cplx mid = 0.5 * (A.vertices[static_cast<std::size_t>(side)] + A.vertices[(static_cast<std::size_t>(side) + 1) % n]);
    double t2 = tau * tau;
    double z2 = A.label.power(mid) + t2;
    double ra = std::sqrt(A.label.radius * A.label.radius + t2);
    double rb = std::sqrt(B.label.radius * B.label.radius + t2);
    cplx da = mid - A.label.center, db = mid - pb;
    double cosn = (da.real() * db.real() + da.imag() * db.imag() + z2) / (ra * rb);
    return std::numbers::pi - std::acos(std::clamp(cosn, -1.0, 1.0));
}

MobiusTransform pairing_mobius(const PolygonCell& A, const PolygonCell& B) {
    if (!A.pairing) fail(ErrorKind::PairingFailure, "cell has no pairing");
    cplx P = A.label.center, Q = B.label.center;
    cplx kappa = A.pairing->map.mu * A.label.radius * A.label.radius;
    return MobiusTransform::normalized(Q, kappa - Q * P, 1.0, -P);
}

std::vector<EdgeCycle> edge_cycles(const FordEnsemble& E) {
    std::vector<std::vector<bool>> seen;
    for (const auto& T : E.cusps) seen.emplace_back(T.edges.size(), false);
    std::vector<EdgeCycle> out;
    const std::size_t limit = 4 * E.cell_count() * 16 + 16;
    for (const auto& T0 : E.cusps)
        for (std::size_t e0 = 0; e0 < T0.edges.size(); ++e0) {
            if (seen[static_cast<std::size_t>(T0.cusp)][e0]) continue;
            EdgeCycle cyc;
            MobiusTransform H;
            int cusp = T0.cusp, cell = T0.edges[e0].cell_a, side = T0.edges[e0].side_a;
            const int start_cusp = cusp, start_cell = cell, start_side = side;
            for (std::size_t step = 0;; ++step) {
                if (step > limit) fail(ErrorKind::GluingInconsistency, "edge cycle does not close");
                const PolygonCell& X = E.cell(cusp, cell);
                if (!X.pairing) fail(ErrorKind::PairingFailure, "cell has no pairing");
                const auto& p = *X.pairing;
                const PolygonCell& Y = E.cell(p.cusp, p.cell);
                const int nx = static_cast<int>(X.vertices.size());
                int yside = p.corner_map[static_cast<std::size_t>((side + 1) % nx)];
                H = pairing_mobius(X, Y) * H;
                const FordTessellation& Ty = E.cusps[static_cast<std::size_t>(p.cusp)];
                int eidx = Y.side_edge[static_cast<std::size_t>(yside)];
                const FordEdge& fe = Ty.edges[static_cast<std::size_t>(eidx)];
                seen[static_cast<std::size_t>(p.cusp)][static_cast<std::size_t>(eidx)] = true;
                cyc.occurrences.emplace_back(p.cusp, eidx);
                cyc.angle_sum += ford_dihedral_angle(Ty, Y.index, yside);
                const CellSide& cs = Y.sides[static_cast<std::size_t>(yside)];
                int zcell, zside;
                if (fe.cell_a == Y.index && fe.side_a == yside) {
                    zcell = fe.cell_b;
                    zside = fe.side_b;
                } else {
                    zcell = fe.cell_a;
                    zside = fe.side_a;
                }
                H = MobiusTransform::translation(-Ty.lattice.vector(cs.shift)) * H;
                cusp = p.cusp;
                cell = zcell;
                side = zside;
                if (cusp == start_cusp && cell == start_cell && side == start_side) break;
            }
            cyc.holonomy_error = H.distance_to(MobiusTransform());
            out.push_back(std::move(cyc));
        }
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

} // namespace

std::vector<std::vector<VertexOccurrence>> ford_vertex_classes(const FordEnsemble& E) {
    std::vector<int> base;
    int total = 0;
    for (const auto& T : E.cusps) {
        base.push_back(total);
        total += static_cast<int>(T.vertices.size());
    }
    UnionFind uf(static_cast<std::size_t>(total));
    for (const auto& T : E.cusps)
        for (const auto& X : T.cells) {
            if (!X.pairing) fail(ErrorKind::PairingFailure, "cell has no pairing");
            const PolygonCell& Y = E.cell(X.pairing->cusp, X.pairing->cell);
            for (std::size_t k = 0; k < X.vertices.size(); ++k) {
                int a = base[static_cast<std::size_t>(T.cusp)] + X.corner_vertex[k];
                int b = base[static_cast<std::size_t>(Y.cusp)] +
                        Y.corner_vertex[static_cast<std::size_t>(X.pairing->corner_map[k])];
                uf.unite(a, b);
            }
        }
    std::vector<std::vector<VertexOccurrence>> classes;
    std::vector<int> class_of(static_cast<std::size_t>(total), -1);
    for (std::size_t c = 0; c < E.cusps.size(); ++c)
        for (std::size_t v = 0; v < E.cusps[c].vertices.size(); ++v) {
            int root = uf.find(base[c] + static_cast<int>(v));
            int& id = class_of[static_cast<std::size_t>(root)];
            if (id < 0) {
                id = static_cast<int>(classes.size());
                classes.emplace_back();
            }
            classes[static_cast<std::size_t>(id)].push_back({static_cast<int>(c), static_cast<int>(v)});
        }
    return classes;
}

namespace {

// Incident labels (with translates) around Ford vertex v of T, in the frame of v, CCW.
std::vector<HemisphereLabel> incident_labels(const FordTessellation& T, int v) {
    const FordVertex& fv = T.vertices.at(static_cast<std::size_t>(v));
    std::vector<HemisphereLabel> out;
    for (const auto& cr : fv.corners) {
        const PolygonCell& c = T.cells[static_cast<std::size_t>(cr.cell)];
        cplx x = c.vertices[static_cast<std::size_t>(cr.corner)];
        cplx lam = T.lattice.vector(T.lattice.nearest_shift(x - fv.position));
        out.push_back({c.label.center - lam, c.label.radius});
    }
    std::sort(out.begin(), out.end(), [&](const HemisphereLabel& a, const HemisphereLabel& b) {
        return std::arg(a.center - fv.position) < std::arg(b.center - fv.position);
    });
    return out;
}

} // namespace

std::vector<IdealDualCell> dual_cells(const FordEnsemble& E) {
    std::vector<IdealDualCell> out;
    auto classes = ford_vertex_classes(E);
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        IdealDualCell X;
        X.vertex_class = static_cast<int>(ci);
        X.chart = classes[ci].front();
        const FordTessellation& T = E.cusps[static_cast<std::size_t>(X.chart.cusp)];
        const FordVertex& fv = T.vertices[static_cast<std::size_t>(X.chart.vertex)];
        X.position = fv.position;
        X.height = fv.height;
        const double h2 = fv.height * fv.height;

        std::vector<cplx> pts;
        for (const auto& L : incident_labels(T, X.chart.vertex)) {
            if (std::abs(L.power(X.position) - h2) > kEps)
                fail(ErrorKind::Inconsistency, "incident labels reach a Ford vertex at different powers");
            pts.push_back(L.center);
        }
        // Hidden labels passing exactly through the vertex are ideal vertices too.
        for (const auto& s : T.dominated)
            for (const LatticeShift& sh : T.lattice.shifts_within(s.label.center - X.position, s.label.radius)) {
                HemisphereLabel L{s.label.center + T.lattice.vector(sh), s.label.radius};
                if (std::abs(L.power(X.position) - h2) <= kEps) pts.push_back(L.center);
            }
        std::sort(pts.begin(), pts.end(), [&](cplx a, cplx b) { return std::arg(a - X.position) < std::arg(b - X.position); });
        X.parabolic_points.push_back(ComplexPoint::infinity());
        for (cplx p : pts) X.parabolic_points.emplace_back(p);
        for (const auto& occ : classes[ci]) {
            const FordTessellation& To = E.cusps[static_cast<std::size_t>(occ.cusp)];
            CrossSection cs;
            cs.occurrence = occ;
            cplx w = To.vertices[static_cast<std::size_t>(occ.vertex)].position;
            for (const auto& L : incident_labels(To, occ.vertex)) cs.polygon.push_back(L.center - w);
            X.cross_sections.push_back(std::move(cs));
        }
        out.push_back(std::move(X));
    }
    return out;
}

} // namespace fordspine
