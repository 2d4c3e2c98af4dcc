#include "fordspine/spine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

namespace fordspine {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            int& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Compacts union-find roots into consecutive class ids in first-seen order.
std::vector<int> class_ids(UnionFind& uf, std::size_t n, int& count) {
    std::vector<int> id_of_root(n, -1), out(n);
    count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int r = uf.find(static_cast<int>(i));
        if (id_of_root[static_cast<std::size_t>(r)] < 0) id_of_root[static_cast<std::size_t>(r)] = count++;
        out[i] = id_of_root[static_cast<std::size_t>(r)];
    }
    return out;
}

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

} // namespace

SpineComplex assemble(std::shared_ptr<const FordEnsemble> ensemble) {
    if (!ensemble) fail(ErrorKind::InvalidArgument, "no ensemble");
    const FordEnsemble& E = *ensemble;
    SpineComplex S;
    S.ensemble = ensemble;

    for (const auto& T : E.cusps)
        for (const auto& c : T.cells) {
            if (!c.pairing) fail(ErrorKind::MalformedComplex, "unpaired cell");
            if (c.pairing->cusp == T.cusp && c.pairing->cell == c.index)
                fail(ErrorKind::MalformedComplex, "a cell is paired with itself");
        }

    // Vertices.
    auto vclasses = ford_vertex_classes(E);
    int flat = 0;
    for (const auto& T : E.cusps) {
        S.vertex_of_occurrence_base.push_back(flat);
        flat += static_cast<int>(T.vertices.size());
    }
    S.occurrence_vertex.assign(uz(flat), -1);
    for (std::size_t v = 0; v < vclasses.size(); ++v) {
        S.vertices.push_back({vclasses[v]});
        for (const auto& occ : vclasses[v])
            S.occurrence_vertex[uz(S.vertex_of_occurrence_base[uz(occ.cusp)] + occ.vertex)] = static_cast<int>(v);
    }

    // Edges: one per cycle of Ford edges around a spine edge.
    for (const auto& cyc : edge_cycles(E)) {
        SpineEdge se;
        double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
        for (auto [cusp, e] : cyc.occurrences) {
            se.occurrences.push_back({cusp, e});
            const FordEdge& fe = E.cusps[uz(cusp)].edges[uz(e)];
            double len = std::abs(fe.end - fe.start);
            lmin = std::min(lmin, len);
            lmax = std::max(lmax, len);
        }
        if (lmax - lmin > kEps) fail(ErrorKind::GluingInconsistency, "identified edges have different lengths");
        se.degree = static_cast<int>(se.occurrences.size());
        se.cone_angle = se.degree * std::numbers::pi;
        se.length = lmax;
        S.edges.push_back(std::move(se));
    }

    // Faces.
    for (const auto& T : E.cusps)
        for (const auto& c : T.cells) {
            CellRef a{T.cusp, c.index}, b{c.pairing->cusp, c.pairing->cell};
            if (a.cusp < b.cusp || (a.cusp == b.cusp && a.cell < b.cell)) S.faces.push_back({a, b});
        }
    if (2 * S.faces.size() != E.cell_count()) fail(ErrorKind::MalformedComplex, "faces do not have two preimages each");
    S.euler_characteristic =
        static_cast<int>(S.vertices.size()) - static_cast<int>(S.edges.size()) + static_cast<int>(S.faces.size());

    // Germs of edges at vertices, and corners, identified by adjacency and by pairings.
    std::vector<std::vector<int>> germ_base(E.cusps.size()), corner_base(E.cusps.size());
    int ng = 0, nc = 0;
    for (const auto& T : E.cusps)
        for (const auto& c : T.cells) {
            germ_base[uz(T.cusp)].push_back(ng);
            corner_base[uz(T.cusp)].push_back(nc);
            ng += 2 * static_cast<int>(c.vertices.size());
            nc += static_cast<int>(c.vertices.size());
        }
    auto germ = [&](int cusp, int cell, int side, int end) { return germ_base[uz(cusp)][uz(cell)] + 2 * side + end; };
    auto corner = [&](int cusp, int cell, int k) { return corner_base[uz(cusp)][uz(cell)] + k; };
    UnionFind ug(uz(ng)), uc(uz(nc));
    for (const auto& T : E.cusps) {
        for (const auto& fe : T.edges) {
            ug.unite(germ(T.cusp, fe.cell_a, fe.side_a, 0), germ(T.cusp, fe.cell_b, fe.side_b, 1));
            ug.unite(germ(T.cusp, fe.cell_a, fe.side_a, 1), germ(T.cusp, fe.cell_b, fe.side_b, 0));
        }
        for (const auto& X : T.cells) {
            const auto& p = *X.pairing;
            const int n = static_cast<int>(X.vertices.size());
            for (int s = 0; s < n; ++s) {
                int ys = p.corner_map[uz((s + 1) % n)];
                ug.unite(germ(T.cusp, X.index, s, 0), germ(p.cusp, p.cell, ys, 1));
                ug.unite(germ(T.cusp, X.index, s, 1), germ(p.cusp, p.cell, ys, 0));
                uc.unite(corner(T.cusp, X.index, s), corner(p.cusp, p.cell, p.corner_map[uz(s)]));
            }
        }
    }
    std::vector<int> gid = class_ids(ug, uz(ng), S.germ_count);
    std::vector<int> cid = class_ids(uc, uz(nc), S.corner_class_count);
    S.germ_vertex.assign(uz(S.germ_count), -1);
    S.germ_class.resize(E.cusps.size());
    S.corner_class.resize(E.cusps.size());
    for (const auto& T : E.cusps) {
        auto& gc = S.germ_class[uz(T.cusp)];
        auto& cc = S.corner_class[uz(T.cusp)];
        for (const auto& X : T.cells) {
            const int n = static_cast<int>(X.vertices.size());
            std::vector<int> g(uz(2 * n)), c(uz(n));
            for (int s = 0; s < n; ++s) {
                for (int end = 0; end < 2; ++end) {
                    int id = gid[uz(germ(T.cusp, X.index, s, end))];
                    g[uz(2 * s + end)] = id;
                    int occ = X.corner_vertex[uz((s + end) % n)];
                    int v = S.occurrence_vertex[uz(S.vertex_of_occurrence_base[uz(T.cusp)] + occ)];
                    int& gv = S.germ_vertex[uz(id)];
                    if (gv >= 0 && gv != v) fail(ErrorKind::GluingInconsistency, "an edge germ sits at two vertices");
                    gv = v;
                }
                c[uz(s)] = cid[uz(corner(T.cusp, X.index, s))];
            }
            gc.push_back(std::move(g));
            cc.push_back(std::move(c));
        }
    }
    return S;
}

LinkGraph vertex_link(const SpineComplex& S, int vertex) {
    if (vertex < 0 || uz(vertex) >= S.vertices.size()) fail(ErrorKind::InvalidArgument, "no such spine vertex");
    const FordEnsemble& E = *S.ensemble;
    LinkGraph L;
    L.vertex = vertex;
    std::vector<int> node_of_germ(uz(S.germ_count), -1);
    for (int g = 0; g < S.germ_count; ++g)
        if (S.germ_vertex[uz(g)] == vertex) node_of_germ[uz(g)] = L.node_count++;
    std::vector<int> edge_of_corner(uz(S.corner_class_count), -1);
    for (const auto& occ : S.vertices[uz(vertex)].occurrences) {
        const FordTessellation& T = E.cusps[uz(occ.cusp)];
        CuspCircle circle;
        circle.occurrence = occ;
        for (const auto& cr : T.vertices[uz(occ.vertex)].corners) {
            const PolygonCell& X = T.cells[uz(cr.cell)];
            const int n = static_cast<int>(X.vertices.size());
            const int k = cr.corner;
            const auto& g = S.germ_class[uz(occ.cusp)][uz(cr.cell)];
            int u = node_of_germ[uz(g[uz(2 * ((k + n - 1) % n) + 1)])];
            int w = node_of_germ[uz(g[uz(2 * k)])];
            double angle = X.corner_angle(uz(k));
            if (!(angle > 0.0 && angle < std::numbers::pi))
                fail(ErrorKind::GeometryInconsistency, "corner angle outside (0, pi)");
            int cc = S.corner_class[uz(occ.cusp)][uz(cr.cell)][uz(k)];
            int& eid = edge_of_corner[uz(cc)];
            if (eid < 0) {
                eid = static_cast<int>(L.edges.size());
                L.edges.push_back({u, w, angle, {}});
            } else {
                LinkEdge& le = L.edges[uz(eid)];
                bool same_ends = (le.u == u && le.v == w) || (le.u == w && le.v == u);
                if (!same_ends || std::abs(le.length - angle) > kEps)
                    fail(ErrorKind::GluingInconsistency, "paired corners disagree");
            }
            L.edges[uz(eid)].corners.push_back({occ.cusp, cr.cell, k});
            circle.edges.push_back(eid);
            circle.length += angle;
        }
        if (std::abs(circle.length - 2.0 * std::numbers::pi) > 1e-9) {
            std::ostringstream ss;
            ss << "cusp circle at spine vertex " << vertex << " has length " << circle.length;
            fail(ErrorKind::GeometryInconsistency, ss.str());
        }
        L.circles.push_back(std::move(circle));
    }
    return L;
}

LinkCheck check_link_large(const LinkGraph& L) {
    const int n = L.node_count;
    std::vector<std::vector<std::pair<int, int>>> adj(uz(n));  // (neighbor, edge id)
    for (std::size_t e = 0; e < L.edges.size(); ++e) {
        const auto& le = L.edges[e];
        if (le.u < 0 || le.v < 0 || le.u >= n || le.v >= n) fail(ErrorKind::MalformedComplex, "link edge endpoint out of range");
        adj[uz(le.u)].push_back({le.v, static_cast<int>(e)});
        if (le.u != le.v) adj[uz(le.v)].push_back({le.u, static_cast<int>(e)});
    }
    if (n == 0) fail(ErrorKind::MalformedComplex, "empty link");
    {
        std::vector<bool> seen(uz(n), false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [y, e] : adj[uz(x)])
                if (!seen[uz(y)]) {
                    seen[uz(y)] = true;
                    ++count;
                    stack.push_back(y);
                }
        }
        if (count != n) fail(ErrorKind::MalformedComplex, "link graph is disconnected");
    }

    LinkCheck out;
    out.systole = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < L.edges.size(); ++e) {
        const auto& le = L.edges[e];
        if (le.u == le.v) {
            if (le.length < out.systole) {
                out.systole = le.length;
                out.witness = {static_cast<int>(e)};
            }
            continue;
        }
        // Dijkstra from u to v without edge e.
        std::vector<double> dist(uz(n), std::numeric_limits<double>::infinity());
        std::vector<int> via(uz(n), -1), prev(uz(n), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[uz(le.u)] = 0.0;
        pq.push({0.0, le.u});
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > dist[uz(x)]) continue;
            if (x == le.v) break;
            for (auto [y, f] : adj[uz(x)]) {
                if (f == static_cast<int>(e)) continue;
                double nd = d + L.edges[uz(f)].length;
                if (nd < dist[uz(y)]) {
                    dist[uz(y)] = nd;
                    via[uz(y)] = f;
                    prev[uz(y)] = x;
                    pq.push({nd, y});
                }
            }
        }
        double cyc = dist[uz(le.v)] + le.length;
        if (cyc < out.systole) {
            out.systole = cyc;
            out.witness = {static_cast<int>(e)};
            for (int x = le.v; x != le.u; x = prev[uz(x)]) out.witness.push_back(via[uz(x)]);
        }
    }
    out.pass = out.systole >= 2.0 * std::numbers::pi - 1e-9;
    return out;
}

CappedLink completed_link(const LinkGraph& L) {
    CappedLink out;
    for (const auto& c : L.circles) {
        if (std::abs(c.length - 2.0 * std::numbers::pi) > 1e-9)
            fail(ErrorKind::Inconsistency, "cusp circle is not a great circle");
        out.cap_lengths.push_back(c.length);
    }
    out.euler_characteristic =
        L.node_count - static_cast<int>(L.edges.size()) + static_cast<int>(L.circles.size());
    return out;
}

} // namespace fordspine
