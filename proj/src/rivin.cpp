#include "fordspine/rivin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace fordspine {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Normalized turn of o->a->b, so collinearity is judged independently of scale.
double turn(cplx o, cplx a, cplx b) {
    cplx u = a - o, v = b - a;
    double nu = std::abs(u), nv = std::abs(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return cross(u, v) / (nu * nv);
}

// Strict convex hull, CCW, as indices into pts.
std::vector<int> convex_hull(const std::vector<cplx>& pts) {
    std::vector<int> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const cplx &p = pts[static_cast<std::size_t>(a)], &q = pts[static_cast<std::size_t>(b)];
        return p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag());
    });
    if (idx.size() < 3) return idx;
    std::vector<int> h(2 * idx.size());
    std::size_t k = 0;
    auto P = [&](int i) { return pts[static_cast<std::size_t>(i)]; };
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && turn(P(h[k - 2]), P(h[k - 1]), P(idx[i])) <= 1e-9) --k;
        h[k++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && turn(P(h[k - 2]), P(h[k - 1]), P(idx[i])) <= 1e-9) --k;
        h[k++] = idx[i];
    }
    h.resize(k - 1);
    return h;
}

bool on_segment(cplx a, cplx b, cplx x) {
    double len = std::abs(b - a);
    if (len == 0.0) return false;
    double t = std::real((x - a) * std::conj(b - a)) / (len * len);
    double dist = std::abs(cross(b - a, x - a)) / len;
    return t > 1e-9 && t < 1.0 - 1e-9 && dist <= 1e-9 * len;
}

} // namespace

PolarDualData polar_dual(const IdealDualCell& cell) { return polar_dual(cell.parabolic_points); }

PolarDualData polar_dual(const std::vector<ComplexPoint>& V) {
    const int n = static_cast<int>(V.size());
    if (n < 4) fail(ErrorKind::GeometryInconsistency, "an ideal polyhedron needs at least 4 vertices");
    PolarDualData D;
    std::map<std::vector<int>, int> face_id;
    std::map<std::pair<int, int>, int> edge_id;
    std::vector<int> edge_seen;
    std::vector<std::pair<int, int>> edge_faces;

    auto face_of = [&](std::vector<int> key) {
        std::sort(key.begin(), key.end());
        auto [it, fresh] = face_id.emplace(key, static_cast<int>(D.faces.size()));
        if (fresh) D.faces.push_back(key);
        return it->second;
    };

    for (int y = 0; y < n; ++y) {
        // Send y to infinity; faces through y become vertical planes over hull edges.
        std::vector<cplx> img;
        std::vector<int> who;
        for (int w = 0; w < n; ++w) {
            if (w == y) continue;
            cplx q;
            if (V[static_cast<std::size_t>(y)].is_infinite()) q = V[static_cast<std::size_t>(w)].value();
            else if (V[static_cast<std::size_t>(w)].is_infinite()) q = 0.0;
            else q = 1.0 / (V[static_cast<std::size_t>(w)].value() - V[static_cast<std::size_t>(y)].value());
            img.push_back(q);
            who.push_back(w);
        }
        std::vector<int> hull = convex_hull(img);
        const std::size_t m = hull.size();
        if (m < 3) fail(ErrorKind::GeometryInconsistency, "ideal vertices are degenerate");

        std::vector<int> side_face(m);
        for (std::size_t j = 0; j < m; ++j) {
            int a = hull[j], b = hull[(j + 1) % m];
            std::vector<int> key{y, who[static_cast<std::size_t>(a)], who[static_cast<std::size_t>(b)]};
            for (std::size_t t = 0; t < img.size(); ++t)
                if (on_segment(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)], img[t]))
                    key.push_back(who[t]);
            side_face[j] = face_of(key);
        }

        std::vector<int> cycle;
        for (std::size_t j = 0; j < m; ++j) {
            cplx prev = img[static_cast<std::size_t>(hull[(j + m - 1) % m])];
            cplx cur = img[static_cast<std::size_t>(hull[j])];
            cplx next = img[static_cast<std::size_t>(hull[(j + 1) % m])];
            double interior = std::abs(std::arg((prev - cur) / (next - cur)));
            double weight = std::numbers::pi - interior;
            int w = who[static_cast<std::size_t>(hull[j])];
            int f1 = side_face[(j + m - 1) % m], f2 = side_face[j];
            auto key = std::make_pair(std::min(y, w), std::max(y, w));
            auto it = edge_id.find(key);
            if (it == edge_id.end()) {
                int id = static_cast<int>(D.edges.size());
                edge_id.emplace(key, id);
                D.edges.push_back({f1, f2, weight, key.first, key.second});
                edge_seen.push_back(1);
                edge_faces.push_back({std::min(f1, f2), std::max(f1, f2)});
                cycle.push_back(id);
            } else {
                int id = it->second;
                ++edge_seen[static_cast<std::size_t>(id)];
                D.endpoint_mismatch = std::max(D.endpoint_mismatch, std::abs(D.edges[static_cast<std::size_t>(id)].weight - weight));
                if (edge_faces[static_cast<std::size_t>(id)] != std::make_pair(std::min(f1, f2), std::max(f1, f2)))
                    fail(ErrorKind::GeometryInconsistency, "an edge borders different faces from its two ends");
                cycle.push_back(id);
            }
        }
        D.face_cycles.push_back(std::move(cycle));
    }
    for (int s : edge_seen)
        if (s != 2) fail(ErrorKind::GeometryInconsistency, "an edge is not seen from both of its ends");
    D.node_count = static_cast<int>(D.faces.size());
    return D;
}

std::vector<std::vector<int>> simple_circuits(int node_count, const std::vector<std::pair<int, int>>& edges,
                                              std::size_t cap) {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(node_count));
    std::set<std::vector<int>> found;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (u == v) {
            found.insert({static_cast<int>(e)});
            continue;
        }
        adj[static_cast<std::size_t>(u)].push_back({v, static_cast<int>(e)});
        adj[static_cast<std::size_t>(v)].push_back({u, static_cast<int>(e)});
    }
    std::vector<int> path;
    std::vector<bool> on_path(static_cast<std::size_t>(node_count), false);
    // Each circuit is rooted at its smallest node.
    auto dfs = [&](auto&& self, int s, int x) -> void {
        if (cap != 0 && path.size() >= cap) return;
        for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
            if (!path.empty() && e == path.back()) continue;
            if (y == s) {
                std::vector<int> c = path;
                c.push_back(e);
                if (std::find(path.begin(), path.end(), e) != path.end()) continue;
                std::sort(c.begin(), c.end());
                found.insert(std::move(c));
            } else if (y > s && !on_path[static_cast<std::size_t>(y)]) {
                on_path[static_cast<std::size_t>(y)] = true;
                path.push_back(e);
                self(self, s, y);
                path.pop_back();
                on_path[static_cast<std::size_t>(y)] = false;
            }
        }
    };
    for (int s = 0; s < node_count; ++s) {
        on_path[static_cast<std::size_t>(s)] = true;
        dfs(dfs, s, s);
        on_path[static_cast<std::size_t>(s)] = false;
    }
    return {found.begin(), found.end()};
}

RivinReport rivin_check(const PolarDualData& D, std::size_t circuit_cap) {
    RivinReport r;
    const double two_pi = 2.0 * std::numbers::pi;
    r.min_weight = std::numeric_limits<double>::infinity();
    r.max_weight = -std::numeric_limits<double>::infinity();
    r.condition1 = true;
    for (const auto& e : D.edges) {
        r.min_weight = std::min(r.min_weight, e.weight);
        r.max_weight = std::max(r.max_weight, e.weight);
        if (!(e.weight > 0.0 && e.weight < std::numbers::pi)) r.condition1 = false;
    }

    auto sum_of = [&](const std::vector<int>& c) {
        double s = 0.0;
        for (int e : c) s += D.edges.at(static_cast<std::size_t>(e)).weight;
        return s;
    };
    std::set<std::vector<int>> face_sets;
    r.condition2 = true;
    for (const auto& fc : D.face_cycles) {
        double err = std::abs(sum_of(fc) - two_pi);
        r.max_face_error = std::max(r.max_face_error, err);
        if (err > 1e-9) r.condition2 = false;
        std::vector<int> s = fc;
        std::sort(s.begin(), s.end());
        face_sets.insert(s);
    }

    std::vector<std::pair<int, int>> ends;
    for (const auto& e : D.edges) ends.push_back({e.u, e.v});
    r.min_nonface_sum = std::numeric_limits<double>::infinity();
    r.condition3 = true;
    for (const auto& c : simple_circuits(D.node_count, ends, circuit_cap)) {
        ++r.circuits_checked;
        if (face_sets.count(c)) continue;
        double s = sum_of(c);
        if (s < r.min_nonface_sum) {
            r.min_nonface_sum = s;
            r.witness = c;
        }
        if (!(s > two_pi + 1e-9)) r.condition3 = false;
    }
    return r;
}

} // namespace fordspine
