#include "fordspine/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fordspine {

namespace {

constexpr double kMergeTol = 1e-9;
constexpr double kVertexClusterTol = 1e-7;

struct HalfPlane {
    cplx n;    // unit normal
    double c;  // keep n.u <= c (local coordinates around the site)
    CellSide tag;
};

double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

// Sutherland-Hodgman step that carries the generating constraint of every side.
void clip(std::vector<cplx>& poly, std::vector<CellSide>& tags, const HalfPlane& h) {
    const std::size_t n = poly.size();
    if (n == 0) return;
    std::vector<cplx> out;
    std::vector<CellSide> out_tags;
    out.reserve(n + 1);
    out_tags.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        cplx cur = poly[i], nxt = poly[(i + 1) % n];
        double fc = dot(h.n, cur) - h.c, fn = dot(h.n, nxt) - h.c;
        bool in_c = fc <= 1e-13, in_n = fn <= 1e-13;
        if (in_c) {
            out.push_back(cur);
            out_tags.push_back(tags[i]);
            if (!in_n) {
                double t = fc / (fc - fn);
                out.push_back(cur + t * (nxt - cur));
                out_tags.push_back(h.tag);
            }
        } else if (in_n) {
            double t = fc / (fc - fn);
            out.push_back(cur + t * (nxt - cur));
            out_tags.push_back(tags[i]);
        }
    }
    poly.swap(out);
    tags.swap(out_tags);
}

void merge_close(std::vector<cplx>& poly, std::vector<CellSide>& tags) {
    bool changed = true;
    while (changed && poly.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            std::size_t j = (i + 1) % poly.size();
            if (std::abs(poly[i] - poly[j]) <= kMergeTol) {
                // side i has zero length: drop vertex j and let vertex i take its side
                tags[i] = tags[j];
                poly.erase(poly.begin() + static_cast<long>(j));
                tags.erase(tags.begin() + static_cast<long>(j));
                changed = true;
                break;
            }
        }
    }
}

} // namespace

double PolygonCell::corner_angle(std::size_t k) const {
    const std::size_t n = vertices.size();
    cplx v = vertices[k];
    cplx prev = vertices[(k + n - 1) % n], next = vertices[(k + 1) % n];
    return std::arg((prev - v) / (next - v));
}

namespace {

// Clips the cell of site j against every active site and its translates.
ClippedCell clip_one(const std::vector<HemisphereLabel>& labels, const Lattice& lattice, std::size_t j,
                     const std::vector<bool>& active) {
    ClippedCell cell;
    const std::size_t n = labels.size();
    const auto& Lj = labels[j];
    std::vector<HalfPlane> planes;
    for (std::size_t k = 0; k < n; ++k) {
        if (!active[k]) continue;
        const auto& Lk = labels[k];
        cplx d0 = Lk.center - Lj.center;
        for (const LatticeShift& s : lattice.shifts_within(d0, Lj.radius + Lk.radius + kMergeTol)) {
            if (k == j && s == LatticeShift{}) continue;
            cplx d = d0 + lattice.vector(s);
            double len = std::abs(d);
            if (len < 1e-14) {
                // duplicate site: the earlier copy owns the cell
                if (k < j && std::abs(Lk.radius - Lj.radius) < 1e-14) return cell;
                if (Lk.radius > Lj.radius) return cell;  // concentric and smaller: dominated
                continue;
            }
            // 2 d.u <= r_j^2 - r_k^2 + |d|^2
            double b = Lj.radius * Lj.radius - Lk.radius * Lk.radius + len * len;
            planes.push_back({d / len, b / (2.0 * len), {static_cast<int>(k), s}});
        }
    }
    std::sort(planes.begin(), planes.end(), [](const HalfPlane& a, const HalfPlane& b) { return a.c < b.c; });
    double h = Lj.radius * (1.0 + 1e-3) + kMergeTol;
    std::vector<cplx> poly = {{-h, -h}, {h, -h}, {h, h}, {-h, h}};
    std::vector<CellSide> tags(4, CellSide{-1, {}});
    for (const auto& hp : planes) {
        if (hp.c > h * std::sqrt(2.0)) break;  // farther planes cannot reach the box
        clip(poly, tags, hp);
        if (poly.size() < 3) break;
    }
    merge_close(poly, tags);
    if (poly.size() < 3 || polygon_area(poly) <= 1e-14 * Lj.radius * Lj.radius) return cell;
    cell.empty = false;
    for (std::size_t v = 0; v < poly.size(); ++v) {
        if (tags[v].neighbor < 0 || std::abs(poly[v]) > Lj.radius + kEps) cell.escapes_disk = true;
        cell.vertices.push_back(Lj.center + poly[v]);
    }
    cell.sides = std::move(tags);
    return cell;
}

} // namespace

std::vector<ClippedCell> clip_power_cells(const std::vector<HemisphereLabel>& labels, const Lattice& lattice) {
    const std::size_t n = labels.size();
    std::vector<ClippedCell> out(n);
    std::vector<bool> active(n, true);
    for (std::size_t j = 0; j < n; ++j) out[j] = clip_one(labels, lattice, j, active);
    // A site with a zero-area cell can still share a supporting line with a real
    // side and win the tag. Dropping it leaves the diagram unchanged, so clip again
    // against the surviving sites only.
    bool degenerate = false;
    for (std::size_t j = 0; j < n; ++j) {
        active[j] = !out[j].empty;
        if (out[j].empty) continue;
        for (const auto& s : out[j].sides)
            if (s.neighbor >= 0 && out[static_cast<std::size_t>(s.neighbor)].empty) degenerate = true;
    }
    if (!degenerate) return out;
    for (std::size_t j = 0; j < n; ++j)
        if (active[j]) out[j] = clip_one(labels, lattice, j, active);
    return out;
}

FordTessellation power_diagram(const std::vector<LabeledSite>& sites, const Lattice& lattice, int cusp) {
    std::vector<HemisphereLabel> labels;
    labels.reserve(sites.size());
    for (const auto& s : sites) labels.push_back(s.label);
    std::vector<ClippedCell> raw = clip_power_cells(labels, lattice);

    FordTessellation T;
    T.cusp = cusp;
    T.lattice = lattice;
    std::vector<int> cell_of(sites.size(), -1);
    for (std::size_t j = 0; j < sites.size(); ++j) {
        if (raw[j].empty) {
            T.dominated.push_back(sites[j]);
            continue;
        }
        if (raw[j].escapes_disk) {
            std::ostringstream ss;
            ss << "labels do not cover the torus of cusp " << cusp << " (cell of site " << j << " leaves its disk)";
            fail(ErrorKind::CutoffTooCoarse, ss.str());
        }
        cell_of[j] = static_cast<int>(T.cells.size());
        PolygonCell c;
        c.cusp = cusp;
        c.index = cell_of[j];
        c.label = sites[j].label;
        c.source_cusp = sites[j].source_cusp;
        c.orbit_entry = sites[j].orbit_entry;
        c.vertices = raw[j].vertices;
        c.sides = raw[j].sides;
        T.cells.push_back(std::move(c));
    }
    if (T.cells.empty()) fail(ErrorKind::CutoffTooCoarse, "no site has a nonempty power cell");
    for (auto& c : T.cells)
        for (auto& s : c.sides) {
            int nb = cell_of[static_cast<std::size_t>(s.neighbor)];
            if (nb < 0) fail(ErrorKind::Inconsistency, "a cell side is generated by an empty cell");
            s.neighbor = nb;
        }

    // Edges: pair each side with the matching side of the neighbor.
    for (auto& c : T.cells) c.side_edge.assign(c.sides.size(), -1);
    for (auto& a : T.cells) {
        const std::size_t na = a.vertices.size();
        for (std::size_t s = 0; s < na; ++s) {
            if (a.side_edge[s] >= 0) continue;
            const CellSide& tag = a.sides[s];
            PolygonCell& b = T.cells[static_cast<std::size_t>(tag.neighbor)];
            cplx shift = lattice.vector(tag.shift);
            cplx p0 = a.vertices[s], p1 = a.vertices[(s + 1) % na];
            int match = -1;
            const std::size_t nb = b.vertices.size();
            for (std::size_t t = 0; t < nb; ++t) {
                if (b.sides[t].neighbor != a.index || !(b.sides[t].shift == -tag.shift)) continue;
                if (&a == &b && t == s) continue;
                cplx q0 = b.vertices[t] + shift, q1 = b.vertices[(t + 1) % nb] + shift;
                if (std::abs(q0 - p1) < 1e-7 && std::abs(q1 - p0) < 1e-7) {
                    match = static_cast<int>(t);
                    break;
                }
            }
            if (match < 0) {
                std::ostringstream ss;
                ss << "side " << s << " of cell " << a.index << " in cusp " << cusp << " has no partner side";
                fail(ErrorKind::Inconsistency, ss.str());
            }
            int e = static_cast<int>(T.edges.size());
            T.edges.push_back({a.index, static_cast<int>(s), b.index, match, tag.shift, p0, p1});
            a.side_edge[s] = e;
            b.side_edge[static_cast<std::size_t>(match)] = e;
        }
    }

    // Vertices: cluster corners modulo the lattice.
    for (auto& c : T.cells) {
        c.corner_vertex.assign(c.vertices.size(), -1);
        for (std::size_t k = 0; k < c.vertices.size(); ++k) {
            cplx x = c.vertices[k];
            int found = -1;
            for (std::size_t v = 0; v < T.vertices.size(); ++v)
                if (lattice.distance_mod(x, T.vertices[v].position) < kVertexClusterTol) {
                    found = static_cast<int>(v);
                    break;
                }
            double h = std::sqrt(std::max(c.label.power(x), 0.0));
            if (found < 0) {
                found = static_cast<int>(T.vertices.size());
                T.vertices.push_back({lattice.reduce(x), {}, h, true});
            } else if (std::abs(T.vertices[static_cast<std::size_t>(found)].height - h) > 1e-9) {
                fail(ErrorKind::Inconsistency, "corners of one Ford vertex disagree on its height");
            }
            T.vertices[static_cast<std::size_t>(found)].corners.push_back({c.index, static_cast<int>(k)});
            c.corner_vertex[k] = found;
        }
    }
    for (auto& v : T.vertices) {
        if (v.corners.size() < 3) fail(ErrorKind::Inconsistency, "Ford vertex with fewer than 3 corners");
        v.generic = v.corners.size() == 3;
    }
    return T;
}

FordTessellation power_diagram(const std::vector<HemisphereLabel>& labels, const Lattice& lattice, int cusp) {
    std::vector<LabeledSite> sites;
    for (const auto& l : labels) sites.push_back({l, -1, -1});
    return power_diagram(sites, lattice, cusp);
}

double FordTessellation::covered_area() const {
    double a = 0.0;
    for (const auto& c : cells) a += c.area();
    return a;
}

double FordTessellation::max_power(cplx x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells)
        for (const LatticeShift& s : lattice.shifts_within(c.label.center - x, c.label.radius))
            best = std::max(best, c.label.power(x - lattice.vector(s)));
    return best;
}

int FordTessellation::owner(cplx x) const {
    double best = -std::numeric_limits<double>::infinity();
    int who = -1;
    for (const auto& c : cells)
        for (const LatticeShift& s : lattice.shifts_within(c.label.center - x, c.label.radius)) {
            double p = c.label.power(x - lattice.vector(s));
            if (p > best) {
                best = p;
                who = c.index;
            }
        }
    return who;
}

int brute_force_owner(const std::vector<HemisphereLabel>& labels, const Lattice& lattice, cplx x) {
    double best = -std::numeric_limits<double>::infinity();
    int who = -1;
    for (std::size_t j = 0; j < labels.size(); ++j)
        for (const LatticeShift& s : lattice.shifts_within(labels[j].center - x, labels[j].radius)) {
            double p = labels[j].power(x - lattice.vector(s));
            if (p > best) {
                best = p;
                who = static_cast<int>(j);
            }
        }
    return who;
}

std::vector<LabeledSite> candidate_sites(const HoroballOrbit& orbit, const CuspScales& scales) {
    const std::size_t i = static_cast<std::size_t>(orbit.viewpoint);
    const double si = scales.heights.at(i);
    std::vector<LabeledSite> out;
    out.reserve(orbit.entries.size());
    for (std::size_t j = 0; j < orbit.entries.size(); ++j) {
        const auto& e = orbit.entries[j];
        double sk = scales.heights.at(static_cast<std::size_t>(e.source_cusp));
        out.push_back({make_label(e.ball.center.value() / si, std::sqrt(e.ball.diameter / (si * sk))),
                       e.source_cusp, static_cast<int>(j)});
    }
    return out;
}

FordTessellation build_tessellation(const ManifoldPresentation& m, const HoroballOrbit& orbit,
                                    const CuspScales& scales) {
    const int i = orbit.viewpoint;
    const double si = scales.heights.at(static_cast<std::size_t>(i));
    Lattice L = m.cusps.at(static_cast<std::size_t>(i)).lattice.scaled(1.0 / si);
    FordTessellation T = power_diagram(candidate_sites(orbit, scales), L, i);
    T.scale = si;
    // A ball below the cutoff gives a label with r^2 < eps / (s_i s_k); it stays hidden
    // as long as the retained surface is higher everywhere.
    double s_min = *std::min_element(scales.heights.begin(), scales.heights.end());
    double hidden = orbit.min_diameter / (si * s_min);
    for (const auto& v : T.vertices)
        if (v.height * v.height <= hidden) {
            std::ostringstream ss;
            ss << "Ford vertex of cusp " << i << " at height " << v.height
               << " could be covered by a label below the cutoff; lower eps";
            fail(ErrorKind::CutoffTooCoarse, ss.str());
        }
    return T;
}

std::vector<LabeledSite> visible_labels(const HoroballOrbit& orbit, const CuspScales& scales,
                                        const ManifoldPresentation& m) {
    FordTessellation T = build_tessellation(m, orbit, scales);
    std::vector<LabeledSite> out;
    for (const auto& c : T.cells) out.push_back({c.label, c.source_cusp, c.orbit_entry});
    return out;
}

HyperbolicPolygon lift_cell(const PolygonCell& cell) {
    for (cplx v : cell.vertices)
        if (std::abs(v - cell.label.center) > cell.label.radius + kEps)
            fail(ErrorKind::Inconsistency, "cell vertex outside the closed label disk");
    return lift_to_hemisphere(cell.label, cell.vertices);
}

} // namespace fordspine
