#pragma once

// Shared helpers for the unit tests and the acceptance runner. The oracles in
// here deliberately avoid the library's own geometry so that they can catch it.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fordspine/export.hpp"

namespace support {

using fordspine::cplx;

inline std::string fixture_path(const std::string& name) {
    return std::string(FORDSPINE_FIXTURE_DIR) + "/" + name + ".json";
}

struct Loaded {
    fordspine::ManifoldPresentation m;
    fordspine::OrbitData od;
};

// Orbit enumeration is the slow part; every test shares one copy per fixture.
inline const Loaded& fixture(const std::string& name, double eps = 0.05) {
    static std::map<std::pair<std::string, double>, Loaded> cache;
    auto key = std::make_pair(name, eps);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Loaded l;
        l.m = fordspine::load_presentation(fixture_path(name));
        l.od = fordspine::prepare_orbits(l.m, eps);
        it = cache.emplace(key, std::move(l)).first;
    }
    return it->second;
}

inline const fordspine::PipelineResult& canonical_result(const std::string& name) {
    static std::map<std::string, fordspine::PipelineResult> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const Loaded& l = fixture(name);
        it = cache.emplace(name, fordspine::run_pipeline(l.m, l.od, l.od.family.scales)).first;
    }
    return it->second;
}

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double segment_distance(cplx x, cplx a, cplx b) {
    cplx d = b - a;
    double t = std::clamp(((x - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(x - (a + t * d));
}

// Signed containment for a convex CCW polygon: +1 inside, -1 outside, 0 within margin of the boundary.
inline int convex_side(const std::vector<cplx>& poly, cplx x, double margin) {
    bool inside = true;
    double nearest = 1e300;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        cplx a = poly[k], b = poly[(k + 1) % poly.size()];
        if (cross(b - a, x - a) < 0.0) inside = false;
        nearest = std::min(nearest, segment_distance(x, a, b));
    }
    if (nearest < margin) return 0;
    return inside ? 1 : -1;
}

struct GridReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;   // within the margin of a cell boundary, or a power tie
    std::size_t mismatches = 0;
};

// Brute force over a resolution x resolution grid of the fundamental
// parallelogram: the site of maximal power (over all translates) must be the
// cell whose polygon contains the point.
inline GridReport grid_oracle(const fordspine::FordTessellation& T, int resolution = 512, double margin = 1e-6) {
    GridReport r;
    const cplx l1 = T.lattice.l1(), l2 = T.lattice.l2();
    const int R = 3;
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
            cplx x = (i + 0.5) / resolution * l1 + (j + 0.5) / resolution * l2;
            double best = -1e300, second = -1e300;
            int who = -1;
            cplx who_shift;
            for (const auto& c : T.cells)
                for (int m = -R; m <= R; ++m)
                    for (int n = -R; n <= R; ++n) {
                        cplx s = double(m) * l1 + double(n) * l2;
                        double p = c.label.radius * c.label.radius - std::norm(x - (c.label.center + s));
                        if (p > best) {
                            second = best;
                            best = p;
                            who = c.index;
                            who_shift = s;
                        } else if (p > second) {
                            second = p;
                        }
                    }
            if (best - second < 1e-9) {
                ++r.skipped;
                continue;
            }
            int side = convex_side(T.cells[static_cast<std::size_t>(who)].vertices, x - who_shift, margin);
            if (side == 0) {
                ++r.skipped;
                continue;
            }
            ++r.checked;
            if (side < 0 || best < 0.0) ++r.mismatches;
        }
    return r;
}

// Random weighted points that cover their torus; about half of the draws pass validation.
inline fordspine::WeightedPointSet random_points(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    fordspine::WeightedCusp c;
    cplx l1{1.0, 0.0};
    cplx l2{U(rng) * 0.8 - 0.4, 0.8 + U(rng) * 0.6};
    c.lattice = fordspine::Lattice(l1, l2);
    int n = 2 + static_cast<int>(U(rng) * 5);
    for (int k = 0; k < n; ++k) {
        cplx p = U(rng) * l1 + U(rng) * l2;
        c.points.push_back({p, 0.35 + 0.6 * U(rng)});
    }
    fordspine::WeightedPointSet W;
    W.cusps.push_back(std::move(c));
    return W;
}

inline std::vector<fordspine::HemisphereLabel> labels_of(const fordspine::WeightedCusp& c) {
    std::vector<fordspine::HemisphereLabel> out;
    for (const auto& p : c.points) out.push_back(fordspine::make_label(p.p, p.w));
    return out;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("fordspine_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Runs the CLI and returns its exit status.
inline int run_cli(const std::string& args, const std::filesystem::path& log) {
    std::string cmd = std::string("\"") + FORDSPINE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace support
