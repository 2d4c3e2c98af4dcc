#include "fordspine/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace fordspine {

namespace {

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

struct Candidate {
    int cusp = 0, cell = 0;  // partner
    PlanarIsometry map;
    std::vector<int> corner_map;
    double residual = 0.0;
};

struct Flat {
    int cusp, cell;
};

// Orientation-reversing congruences of a onto b that send the label center of
// a to the label center of b.
std::vector<Candidate> congruences(const PolygonCell& a, const PolygonCell& b, double tol) {
    std::vector<Candidate> out;
    const std::size_t n = a.vertices.size();
    if (b.vertices.size() != n || n == 0) return out;
    const cplx P = a.label.center, Q = b.label.center;
    const cplx a0 = std::conj(a.vertices[0] - P);
    if (std::abs(a0) == 0.0) return out;
    for (std::size_t t = 0; t < n; ++t) {
        cplx mu = (b.vertices[t] - Q) / a0;
        if (std::abs(std::abs(mu) - 1.0) > 1e-7) continue;
        mu /= std::abs(mu);
        PlanarIsometry iso{Q - mu * std::conj(P), mu};
        std::vector<int> cm;
        double res = congruence_residual(a, b, iso, &cm);
        if (!(res <= tol)) continue;
        bool dup = false;
        for (const auto& c : out) dup = dup || c.corner_map == cm;
        if (!dup) out.push_back({b.cusp, b.index, iso, cm, res});
    }
    return out;
}

CellPairing reverse(const PolygonCell& a, const Candidate& c) {
    CellPairing p;
    p.cusp = a.cusp;
    p.cell = a.index;
    p.map = c.map.inverse();
    p.corner_map.assign(c.corner_map.size(), -1);
    for (std::size_t k = 0; k < c.corner_map.size(); ++k) p.corner_map[uz(c.corner_map[k])] = static_cast<int>(k);
    p.residual = c.residual;
    return p;
}

bool cycles_close(const FordEnsemble& E) {
    try {
        for (const auto& cyc : edge_cycles(E)) {
            if (cyc.holonomy_error > 1e-8) return false;
            if (std::abs(cyc.angle_sum - 2.0 * std::numbers::pi) > 1e-9) return false;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

std::string describe(const std::vector<std::vector<Candidate>>& leaves, const std::vector<Flat>& order) {
    std::ostringstream ss;
    for (std::size_t l = 0; l < leaves.size() && l < 4; ++l) {
        ss << (l ? "; " : "") << "pairing " << l << ":";
        for (std::size_t i = 0; i < order.size(); ++i) {
            ss << " (" << order[i].cusp << "," << order[i].cell << ")->(" << leaves[l][i].cusp << ","
               << leaves[l][i].cell << ") mu=" << leaves[l][i].map.mu << " cm=";
            for (int k : leaves[l][i].corner_map) ss << k;
        }
    }
    return ss.str();
}

} // namespace

WeightedPointSet extract_weighted_points(const FordEnsemble& E) {
    WeightedPointSet W;
    for (const auto& T : E.cusps) {
        WeightedCusp wc;
        wc.lattice = T.lattice;
        for (const auto& c : T.cells) {
            if (c.label.radius >= 1.0) {
                std::ostringstream ss;
                ss << "label radius " << c.label.radius << " in cusp " << T.cusp
                   << " is not below 1; the cusp torus touches a Ford wall";
                fail(ErrorKind::Normalization, ss.str());
            }
            wc.points.push_back({T.lattice.reduce(c.label.center), c.label.radius});
        }
        W.cusps.push_back(std::move(wc));
    }
    return W;
}

WeightDiagnosis validate_weighted_points(const WeightedPointSet& W) {
    WeightDiagnosis d;
    if (W.cusps.empty()) {
        d.covers = false;
        d.failures.push_back("no cusps");
    }
    for (std::size_t c = 0; c < W.cusps.size(); ++c) {
        const auto& wc = W.cusps[c];
        std::ostringstream where;
        where << "cusp " << c;
        if (!(wc.lattice.area() > kEps)) {
            d.covers = false;
            d.failures.push_back(where.str() + ": degenerate lattice");
            continue;
        }
        if (wc.points.empty()) {
            d.covers = false;
            d.failures.push_back(where.str() + ": no points");
            continue;
        }
        for (std::size_t j = 0; j < wc.points.size(); ++j) {
            double w = wc.points[j].w;
            if (!(w > 0.0 && w < 1.0)) {
                d.weights_in_range = false;
                std::ostringstream ss;
                ss << where.str() << ": point " << j << " has weight " << w << " outside (0,1)";
                d.failures.push_back(ss.str());
            }
            for (std::size_t k = 0; k < j; ++k)
                if (wc.lattice.distance_mod(wc.points[j].p, wc.points[k].p) <= kEps) {
                    d.distinct = false;
                    std::ostringstream ss;
                    ss << where.str() << ": points " << k << " and " << j << " coincide modulo the lattice";
                    d.failures.push_back(ss.str());
                }
        }
        if (!d.distinct || !d.weights_in_range) continue;
        std::vector<HemisphereLabel> labels;
        for (const auto& pt : wc.points) labels.push_back({pt.p, pt.w});
        auto cells = clip_power_cells(labels, wc.lattice);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (cells[j].empty) {
                d.dominated.push_back({static_cast<int>(c), static_cast<int>(j)});
            } else if (cells[j].escapes_disk) {
                d.covers = false;
                std::ostringstream ss;
                ss << where.str() << ": the disks do not cover the torus near point " << j;
                d.failures.push_back(ss.str());
            }
        }
    }
    return d;
}

Reconstruction reconstruct(const WeightedPointSet& W, const ReconstructOptions& opt) {
    WeightDiagnosis diag = validate_weighted_points(W);
    if (!diag.pass()) {
        std::string msg = "weighted points rejected";
        for (const auto& f : diag.failures) msg += "; " + f;
        fail(ErrorKind::ValidationFailed, msg);
    }
    Reconstruction R;
    R.dropped = diag.dominated;
    std::vector<std::future<FordTessellation>> jobs;
    for (std::size_t c = 0; c < W.cusps.size(); ++c)
        jobs.push_back(std::async(std::launch::async, [&W, c] {
            std::vector<HemisphereLabel> labels;
            for (const auto& pt : W.cusps[c].points) labels.push_back({pt.p, pt.w});
            return power_diagram(labels, W.cusps[c].lattice, static_cast<int>(c));
        }));
    for (auto& j : jobs) R.ensemble.cusps.push_back(j.get());
    R.ensemble.scales.heights.assign(W.cusps.size(), 1.0);
    for (const auto& T : R.ensemble.cusps) {
        std::vector<HyperbolicPolygon> polys;
        for (const auto& c : T.cells) polys.push_back(lift_cell(c));
        R.lifted.push_back(std::move(polys));
    }
    if (!opt.derive_pairing) return R;

    // Candidate partners: equal radius, orientation-reversing congruence.
    std::vector<Flat> order;
    for (const auto& T : R.ensemble.cusps)
        for (const auto& c : T.cells) order.push_back({T.cusp, c.index});
    std::map<std::pair<int, int>, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[{order[i].cusp, order[i].cell}] = i;
    std::vector<std::vector<Candidate>> cand(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const PolygonCell& A = R.ensemble.cell(order[i].cusp, order[i].cell);
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (j == i) continue;
            const PolygonCell& B = R.ensemble.cell(order[j].cusp, order[j].cell);
            if (std::abs(A.label.radius - B.label.radius) > kEps) continue;
            for (auto& c : congruences(A, B, opt.congruence_tolerance)) cand[i].push_back(std::move(c));
        }
        R.pairing_candidates += cand[i].size();
        if (cand[i].empty()) {
            std::ostringstream ss;
            ss << "cell " << order[i].cell << " of cusp " << order[i].cusp << " has no congruent partner";
            fail(ErrorKind::PairingFailure, ss.str());
        }
    }

    // Perfect matchings, kept when every edge cycle closes up with angle 2pi.
    std::vector<std::vector<Candidate>> valid;
    std::vector<Candidate> chosen(order.size());
    std::vector<bool> used(order.size(), false);
    std::size_t leaves = 0;
    FordEnsemble& E = R.ensemble;
    auto search = [&](auto&& self) -> void {
        std::size_t i = 0;
        while (i < order.size() && used[i]) ++i;
        if (i == order.size()) {
            if (++leaves > opt.max_leaves) fail(ErrorKind::Internal, "pairing search exceeded its leaf budget");
            if (cycles_close(E)) valid.push_back(chosen);
            return;
        }
        PolygonCell& A = E.cusps[uz(order[i].cusp)].cells[uz(order[i].cell)];
        used[i] = true;
        for (const auto& c : cand[i]) {
            std::size_t j = pos.at({c.cusp, c.cell});
            if (used[j]) continue;
            PolygonCell& B = E.cusps[uz(c.cusp)].cells[uz(c.cell)];
            used[j] = true;
            A.pairing = CellPairing{c.cusp, c.cell, c.map, c.corner_map, c.residual};
            B.pairing = reverse(A, c);
            chosen[i] = c;
            chosen[j] = {A.cusp, A.index, B.pairing->map, B.pairing->corner_map, c.residual};
            self(self);
            A.pairing.reset();
            B.pairing.reset();
            used[j] = false;
        }
        used[i] = false;
    };
    search(search);
    if (valid.empty()) fail(ErrorKind::PairingFailure, "no congruence pairing closes up around every edge");
    for (const auto& leaf : valid) {
        PairingAssignment a(E.cusps.size());
        for (std::size_t c = 0; c < E.cusps.size(); ++c) a[c].resize(E.cusps[c].cells.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Candidate& c = leaf[i];
            a[uz(order[i].cusp)][uz(order[i].cell)] = CellPairing{c.cusp, c.cell, c.map, c.corner_map, c.residual};
        }
        R.equivalent_pairings.push_back(std::move(a));
    }
    for (std::size_t l = 1; l < R.equivalent_pairings.size(); ++l)
        if (!pairings_equivalent(E, R.equivalent_pairings[0], R.equivalent_pairings[l]))
            fail(ErrorKind::Ambiguity, "inequivalent pairings are consistent: " + describe({valid[0], valid[l]}, order));
    for (std::size_t c = 0; c < E.cusps.size(); ++c)
        for (std::size_t i = 0; i < E.cusps[c].cells.size(); ++i)
            E.cusps[c].cells[i].pairing = R.equivalent_pairings[0][c][i];
    return R;
}

std::vector<TorusSymmetry> cusp_symmetries(const FordTessellation& A, const FordTessellation& B) {
    std::vector<TorusSymmetry> out;
    if (A.cells.empty() || A.cells.size() != B.cells.size()) return out;
    if (std::abs(A.lattice.area() - B.lattice.area()) > 1e-9 * A.lattice.area()) return out;
    const PolygonCell& ref = A.cells[0];
    const cplx l1 = A.lattice.l1(), l2 = A.lattice.l2();
    auto is_lattice_vector = [&](cplx z) {
        auto co = B.lattice.coefficients(z);
        return std::abs(co[0] - std::round(co[0])) < 1e-7 && std::abs(co[1] - std::round(co[1])) < 1e-7;
    };
    std::vector<cplx> images;
    for (const LatticeShift& s : B.lattice.shifts_within(0.0, std::abs(l1) + 1e-7)) {
        cplx v = B.lattice.vector(s);
        if (std::abs(std::abs(v) - std::abs(l1)) < 1e-7) images.push_back(v);
    }
    for (const auto& q : B.cells) {
        if (std::abs(q.label.radius - ref.label.radius) > kEps) continue;
        for (cplx v : images)
            for (bool rev : {false, true}) {
                TorusSymmetry g;
                g.from = A.cusp;
                g.to = B.cusp;
                g.reversing = rev;
                g.u = rev ? v / std::conj(l1) : v / l1;
                g.offset = 0.0;
                if (!is_lattice_vector(g(l2))) continue;
                g.offset = q.label.center - g(ref.label.center);
                bool ok = true;
                std::vector<bool> hit(B.cells.size(), false);
                for (const auto& a : A.cells) {
                    cplx y = g(a.label.center);
                    int m = -1;
                    for (const auto& b : B.cells)
                        if (B.lattice.distance_mod(y, b.label.center) < 1e-7 && std::abs(a.label.radius - b.label.radius) < kEps)
                            m = b.index;
                    if (m < 0 || hit[uz(m)]) {
                        ok = false;
                        break;
                    }
                    hit[uz(m)] = true;
                    g.cell_map.push_back(m);
                }
                if (!ok) continue;
                bool dup = false;
                for (const auto& h : out)
                    dup = dup || (h.reversing == g.reversing && std::abs(h.u - g.u) < 1e-9 && h.cell_map == g.cell_map);
                if (!dup) out.push_back(std::move(g));
            }
    }
    return out;
}

bool pairings_equivalent(const FordEnsemble& E, const PairingAssignment& a, const PairingAssignment& b) {
    const std::size_t p = E.cusps.size();
    std::vector<std::vector<std::vector<TorusSymmetry>>> sym(p, std::vector<std::vector<TorusSymmetry>>(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) sym[i][j] = cusp_symmetries(E.cusps[i], E.cusps[j]);

    // Does the choice g (one symmetry per cusp) conjugate a into b?
    auto conjugates = [&](const std::vector<const TorusSymmetry*>& g) {
        for (std::size_t c = 0; c < p; ++c)
            for (std::size_t i = 0; i < a[c].size(); ++i) {
                const CellPairing& pa = a[c][i];
                const TorusSymmetry& gA = *g[c];
                const TorusSymmetry& gB = *g[uz(pa.cusp)];
                const CellPairing& pb = b[uz(gA.to)][uz(gA.cell_map[i])];
                if (pb.cusp != gB.to || pb.cell != gB.cell_map[uz(pa.cell)]) return false;
                cplx mu = gA.reversing ? gB.u * std::conj(pa.map.mu) * gA.u : gB.u * pa.map.mu * gA.u;
                if (std::abs(mu - pb.map.mu) > 1e-7) return false;
            }
        return true;
    };
    std::vector<int> perm(p);
    for (std::size_t i = 0; i < p; ++i) perm[i] = static_cast<int>(i);
    do {
        bool possible = true;
        for (std::size_t c = 0; c < p; ++c) possible = possible && !sym[c][uz(perm[c])].empty();
        if (!possible) continue;
        for (bool rev : {false, true}) {
            std::vector<const TorusSymmetry*> g(p, nullptr);
            auto pick = [&](auto&& self, std::size_t c) -> bool {
                if (c == p) return conjugates(g);
                for (const auto& s : sym[c][uz(perm[c])]) {
                    if (s.reversing != rev) continue;
                    g[c] = &s;
                    if (self(self, c + 1)) return true;
                }
                return false;
            };
            if (pick(pick, 0)) return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

RoundTripReport compare_ensembles(const FordEnsemble& X, const FordEnsemble& Y) {
    RoundTripReport r;
    auto mismatch = [&](const std::string& why) {
        r.mismatch = why;
        return r;
    };
    if (X.cusps.size() != Y.cusps.size()) return mismatch("cusp counts differ");
    // Cell correspondence and cyclic offsets.
    std::vector<std::vector<int>> f(X.cusps.size()), rot(X.cusps.size());
    for (std::size_t c = 0; c < X.cusps.size(); ++c) {
        const auto& A = X.cusps[c];
        const auto& B = Y.cusps[c];
        if (std::abs(A.lattice.l1() - B.lattice.l1()) > kEps || std::abs(A.lattice.l2() - B.lattice.l2()) > kEps)
            return mismatch("lattices differ");
        if (A.cells.size() != B.cells.size() || A.edges.size() != B.edges.size() ||
            A.vertices.size() != B.vertices.size())
            return mismatch("cell, edge or vertex counts differ in cusp " + std::to_string(c));
        for (const auto& a : A.cells) {
            int match = -1;
            for (const auto& b : B.cells)
                if (A.lattice.distance_mod(a.label.center, b.label.center) < 1e-7 &&
                    std::abs(a.label.radius - b.label.radius) < 1e-7)
                    match = b.index;
            if (match < 0) return mismatch("no counterpart for a cell of cusp " + std::to_string(c));
            const auto& b = B.cells[uz(match)];
            const std::size_t n = a.vertices.size();
            if (b.vertices.size() != n) return mismatch("a cell changed its number of sides");
            cplx lam = b.label.center - a.label.center;
            double best = std::numeric_limits<double>::infinity();
            int best_rot = -1;
            for (std::size_t s = 0; s < n; ++s) {
                double dev = 0.0;
                for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::abs(b.vertices[(k + s) % n] - (a.vertices[k] + lam)));
                if (dev < best) {
                    best = dev;
                    best_rot = static_cast<int>(s);
                }
            }
            f[c].push_back(match);
            rot[c].push_back(best_rot);
            r.max_vertex_deviation = std::max(r.max_vertex_deviation, best);
            r.max_radius_deviation = std::max(r.max_radius_deviation, std::abs(a.label.radius - b.label.radius));
        }
    }
    for (std::size_t c = 0; c < X.cusps.size(); ++c)
        for (const auto& a : X.cusps[c].cells) {
            const auto& b = Y.cusps[c].cells[uz(f[c][uz(a.index)])];
            const int n = static_cast<int>(a.vertices.size());
            const int s = rot[c][uz(a.index)];
            for (int k = 0; k < n; ++k)
                if (b.sides[uz((k + s) % n)].neighbor != f[c][uz(a.sides[uz(k)].neighbor)])
                    return mismatch("cell adjacency differs");
        }
    r.tessellation_match = true;
    for (std::size_t c = 0; c < X.cusps.size(); ++c)
        for (const auto& a : X.cusps[c].cells) {
            const auto& b = Y.cusps[c].cells[uz(f[c][uz(a.index)])];
            if (a.pairing.has_value() != b.pairing.has_value()) return mismatch("pairing presence differs");
            if (!a.pairing) continue;
            const int n = static_cast<int>(a.vertices.size());
            const int s = rot[c][uz(a.index)];
            const auto& pa = *a.pairing;
            const auto& pb = *b.pairing;
            if (pb.cusp != pa.cusp || pb.cell != f[uz(pa.cusp)][uz(pa.cell)]) return mismatch("partners differ");
            const int sp = rot[uz(pa.cusp)][uz(pa.cell)];
            for (int k = 0; k < n; ++k)
                if (pb.corner_map[uz((k + s) % n)] != (pa.corner_map[uz(k)] + sp) % n)
                    return mismatch("pairing corner maps differ");
        }
    r.pairing_exact = true;
    r.pairing_recovered = true;
    r.combinatorial_match = true;
    return r;
}

RoundTripReport round_trip_report(const FordEnsemble& original, const Reconstruction& R) {
    RoundTripReport r = compare_ensembles(original, R.ensemble);
    if (!r.tessellation_match || r.pairing_exact) return r;
    FordEnsemble alt = R.ensemble;
    for (const auto& a : R.equivalent_pairings) {
        for (std::size_t c = 0; c < alt.cusps.size(); ++c)
            for (std::size_t i = 0; i < alt.cusps[c].cells.size(); ++i) alt.cusps[c].cells[i].pairing = a[c][i];
        if (compare_ensembles(original, alt).pairing_exact) {
            r.pairing_recovered = true;
            r.combinatorial_match = true;
            r.mismatch.clear();
            return r;
        }
    }
    return r;
}

} // namespace fordspine
