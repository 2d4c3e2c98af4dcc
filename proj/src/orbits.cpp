#include "fordspine/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace fordspine {

namespace {

constexpr double kKeyResolution = 1e7;

struct BallKey {
    long u, v;
    int cusp;
    bool operator==(const BallKey&) const = default;
};

struct BallKeyHash {
    std::size_t operator()(const BallKey& k) const {
        std::size_t h = std::hash<long>()(k.u);
        h ^= std::hash<long>()(k.v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<int>()(k.cusp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

long wrap(long x) {
    const long n = static_cast<long>(kKeyResolution);
    return ((x % n) + n) % n;
}

BallKey key_for(const Lattice& L, cplx reduced, int cusp) {
    auto [u, v] = L.coefficients(reduced);
    return {wrap(std::lround(u * kKeyResolution)), wrap(std::lround(v * kKeyResolution)), cusp};
}

struct LevelResult {
    std::vector<OrbitEntry> balls;  // every ball found at this prune level
    int max_depth_retained = 0;
};

class Explorer {
public:
    Explorer(const ManifoldPresentation& m, int cusp, double prune, double eps, const EnumerationOptions& opt)
        : m_(m), cusp_(cusp), prune_(prune), eps_(eps), opt_(opt), lattice_(m.cusps[cusp].lattice) {
        for (const auto& g : m.view_generators(cusp))
            if (std::abs(g.c()) > 1e-12) gens_.push_back(g);
    }

    LevelResult run() {
        const MobiusTransform& Ci = m_.cusps[cusp_].conjugator;
        for (int k = 0; k < m_.cusp_count(); ++k) {
            MobiusTransform U = Ci * m_.cusps[k].conjugator.inverse();
            if (std::abs(U.c()) <= 1e-12) {
                if (k != cusp_)
                    fail(ErrorKind::InvalidArgument, "conjugators of distinct cusps agree at infinity");
                for (const auto& g : gens_) consider(g * U, k, 1, /*seed=*/false);
            } else {
                consider(U, k, 0, /*seed=*/true);
            }
        }
        while (!queue_.empty()) {
            std::size_t idx = queue_.front();
            queue_.pop_front();
            expand(idx);
        }
        LevelResult out;
        for (const auto& b : balls_) {
            if (b.ball.diameter >= eps_ * (1.0 - 1e-9)) out.max_depth_retained = std::max(out.max_depth_retained, b.word_length);
        }
        out.balls = std::move(balls_);
        return out;
    }

private:
    void consider(const MobiusTransform& U, int source, int depth, bool seed) {
        double diam = 1.0 / std::norm(U.c());
        if (!std::isfinite(diam) || diam > opt_.max_unit_diameter) {
            std::ostringstream ss;
            ss << "ball of unit diameter " << diam << " found in view " << cusp_
               << "; the generators do not look discrete";
            fail(ErrorKind::EnumerationDiverged, ss.str());
        }
        if (diam < prune_ && !seed) return;
        cplx center = U.a() / U.c();
        LatticeShift s = lattice_.floor_shift(center);
        MobiusTransform R = MobiusTransform::translation(-lattice_.vector(s)) * U;
        cplx reduced = center - lattice_.vector(s);
        BallKey key = key_for(lattice_, reduced, source);
        for (long du = -1; du <= 1; ++du)
            for (long dv = -1; dv <= 1; ++dv) {
                BallKey probe{wrap(key.u + du), wrap(key.v + dv), source};
                auto it = index_.find(probe);
                if (it == index_.end()) continue;
                const OrbitEntry& prev = balls_[it->second];
                if (std::abs(prev.ball.diameter - diam) > 1e-7 * std::max(1.0, diam)) {
                    std::ostringstream ss;
                    ss << "two horoballs of different size share a center in view " << cusp_;
                    fail(ErrorKind::EnumerationDiverged, ss.str());
                }
                return;
            }
        index_.emplace(key, balls_.size());
        balls_.push_back({{reduced, diam}, source, R, depth});
        queue_.push_back(balls_.size() - 1);
        if (balls_.size() > opt_.max_balls) {
            std::ostringstream ss;
            ss << "more than " << opt_.max_balls << " horoballs above " << prune_ << " in view " << cusp_;
            fail(ErrorKind::EnumerationDiverged, ss.str());
        }
    }

    void expand(std::size_t idx) {
        const OrbitEntry e = balls_[idx];
        cplx x = e.ball.center.value();
        for (const auto& g : gens_) {
            cplx pole = -g.d() / g.c();
            double reach = std::sqrt(e.ball.diameter / prune_) / std::abs(g.c());
            for (const LatticeShift& s : lattice_.shifts_within(x - pole, reach)) {
                cplx t = lattice_.vector(s);
                if (std::abs(x + t - pole) < 1e-12) continue;  // lands on infinity
                MobiusTransform U = g * MobiusTransform::translation(t) * e.witness;
                consider(U, e.source_cusp, e.word_length + 1, false);
            }
        }
    }

    const ManifoldPresentation& m_;
    int cusp_;
    double prune_, eps_;
    EnumerationOptions opt_;
    Lattice lattice_;
    std::vector<MobiusTransform> gens_;
    std::vector<OrbitEntry> balls_;
    std::unordered_map<BallKey, std::size_t, BallKeyHash> index_;
    std::deque<std::size_t> queue_;
};

std::vector<OrbitEntry> retained(const std::vector<OrbitEntry>& balls, double eps) {
    std::vector<OrbitEntry> out;
    for (const auto& b : balls)
        if (b.ball.diameter >= eps * (1.0 - 1e-9)) out.push_back(b);  // balls sitting at the cutoff count
    return out;
}

bool same_collection(const Lattice& L, const std::vector<OrbitEntry>& a, const std::vector<OrbitEntry>& b) {
    if (a.size() != b.size()) return false;
    std::unordered_map<BallKey, double, BallKeyHash> seen;
    for (const auto& e : a) seen[key_for(L, e.ball.center.value(), e.source_cusp)] = e.ball.diameter;
    for (const auto& e : b) {
        BallKey k = key_for(L, e.ball.center.value(), e.source_cusp);
        bool found = false;
        for (long du = -1; du <= 1 && !found; ++du)
            for (long dv = -1; dv <= 1 && !found; ++dv) {
                auto it = seen.find({wrap(k.u + du), wrap(k.v + dv), k.cusp});
                if (it != seen.end() && std::abs(it->second - e.ball.diameter) < 1e-9 * std::max(1.0, e.ball.diameter))
                    found = true;
            }
        if (!found) return false;
    }
    return true;
}

} // namespace

HoroballOrbit enumerate_horoballs(const ManifoldPresentation& m, int cusp, double eps,
                                  const EnumerationOptions& options) {
    if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
    if (cusp < 0 || cusp >= m.cusp_count()) fail(ErrorKind::InvalidArgument, "cusp index out of range");

    const Lattice& L = m.cusps[cusp].lattice;
    std::vector<OrbitEntry> previous;
    bool have_previous = false;
    double prune = eps;
    for (int level = 1; level <= options.max_refinements; ++level) {
        prune /= 4.0;
        LevelResult res = Explorer(m, cusp, prune, eps, options).run();
        std::vector<OrbitEntry> current = retained(res.balls, eps);
        if (res.max_depth_retained > options.word_length_cap) {
            std::ostringstream ss;
            ss << "view " << cusp << ": a horoball above " << eps << " needs a word of length "
               << res.max_depth_retained << " > cap " << options.word_length_cap << " (prune " << prune << ")";
            fail(ErrorKind::IncompleteOrbit, ss.str());
        }
        if (have_previous && same_collection(L, previous, current)) {
            HoroballOrbit out;
            out.viewpoint = cusp;
            out.min_diameter = eps;
            out.prune_diameter = prune;
            out.refinement_levels = level;
            out.explored_balls = res.balls.size();
            out.max_word_length = res.max_depth_retained;
            out.entries = std::move(current);
            std::sort(out.entries.begin(), out.entries.end(), [&](const OrbitEntry& a, const OrbitEntry& b) {
                if (std::abs(a.ball.diameter - b.ball.diameter) > 1e-12) return a.ball.diameter > b.ball.diameter;
                if (a.source_cusp != b.source_cusp) return a.source_cusp < b.source_cusp;
                auto ca = L.coefficients(a.ball.center.value());
                auto cb = L.coefficients(b.ball.center.value());
                if (std::abs(ca[0] - cb[0]) > 1e-9) return ca[0] < cb[0];
                return ca[1] < cb[1];
            });
            return out;
        }
        previous = std::move(current);
        have_previous = true;
    }
    std::ostringstream ss;
    ss << "view " << cusp << ": horoballs above " << eps << " did not stabilize down to prune bound " << prune;
    fail(ErrorKind::IncompleteOrbit, ss.str());
}

std::vector<HoroballOrbit> enumerate_all_horoballs(const ManifoldPresentation& m, double eps,
                                                   const EnumerationOptions& options) {
    std::vector<HoroballOrbit> out;
    for (int i = 0; i < m.cusp_count(); ++i) out.push_back(enumerate_horoballs(m, i, eps, options));
    return out;
}

CuspScales CuspScales::scaled(double factor) const {
    CuspScales s = *this;
    for (double& h : s.heights) h *= factor;
    return s;
}

std::vector<std::vector<double>> tangency_bounds(const std::vector<HoroballOrbit>& orbits) {
    std::size_t p = orbits.size();
    std::vector<std::vector<double>> D(p, std::vector<double>(p, std::nan("")));
    for (std::size_t i = 0; i < p; ++i)
        for (const auto& e : orbits[i].entries) {
            double& d = D[i][static_cast<std::size_t>(e.source_cusp)];
            if (std::isnan(d) || e.ball.diameter > d) d = e.ball.diameter;
        }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = i + 1; k < p; ++k) {
            double a = D[i][k], b = D[k][i];
            if (std::isnan(a) != std::isnan(b) || (!std::isnan(a) && std::abs(a - b) > 1e-9 * std::max(a, b)))
                fail(ErrorKind::Inconsistency, "cross-cusp horoball sizes disagree between the two views");
        }
    return D;
}

double maximal_cusp_scale(const HoroballOrbit& orbit) {
    double best = 0.0;
    for (const auto& e : orbit.entries)
        if (e.source_cusp == orbit.viewpoint) best = std::max(best, e.ball.diameter);
    if (best <= 0.0)
        fail(ErrorKind::CutoffTooCoarse, "no horoball of the viewing cusp reaches the cutoff");
    // Lowering the plane to height h shrinks the own-cusp balls to diameter best/h;
    // the first contact is at h = best/h.
    return std::sqrt(best);
}

CanonicalFamily canonical_family(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits) {
    std::size_t p = orbits.size();
    if (p != static_cast<std::size_t>(m.cusp_count()))
        fail(ErrorKind::InvalidArgument, "need one orbit per cusp");
    auto D = tangency_bounds(orbits);
    CanonicalFamily fam;
    for (const auto& o : orbits) fam.maximal.push_back(maximal_cusp_scale(o));
    double sigma = 1.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = i + 1; k < p; ++k)
            if (!std::isnan(D[i][k])) sigma = std::min(sigma, std::sqrt(fam.maximal[i] * fam.maximal[k] / D[i][k]));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::Internal, "shrink factor is not finite");
    fam.sigma = sigma;
    for (double h : fam.maximal) fam.scales.heights.push_back(h / sigma);
    double eps = orbits.front().min_diameter;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = i; k < p; ++k) {
            double prod = fam.scales.heights[i] * fam.scales.heights[k];
            if (std::isnan(D[i][k])) {
                if (prod < eps)
                    fail(ErrorKind::CutoffTooCoarse, "unseen cross-cusp horoballs could still collide; lower eps");
                continue;
            }
            if (std::abs(prod - D[i][k]) <= 1e-9 * D[i][k])
                fam.active_pairs.emplace_back(static_cast<int>(i), static_cast<int>(k));
        }
    return fam;
}

ScaleReport validate_scales(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits,
                            const CuspScales& scales) {
    std::size_t p = orbits.size();
    if (scales.heights.size() != p || p != static_cast<std::size_t>(m.cusp_count()))
        fail(ErrorKind::InvalidArgument, "need one scale and one orbit per cusp");
    for (double h : scales.heights)
        if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::InvalidArgument, "scales must be positive");
    ScaleReport rep;
    double eps = orbits.front().min_diameter;
    const auto& s = scales.heights;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < orbits[i].entries.size(); ++j) {
            const auto& e = orbits[i].entries[j];
            std::size_t k = static_cast<std::size_t>(e.source_cusp);
            ScaleConstraint c{static_cast<int>(i), e.source_cusp, static_cast<int>(j), e.ball.diameter, s[i] * s[k]};
            if (c.product < c.required * (1.0 - 1e-9))
                rep.violations.push_back(c);
            else if (c.product <= c.required * (1.0 + 1e-9))
                rep.tangencies.push_back(c);
        }
        for (std::size_t k = 0; k < p; ++k)
            if (s[i] * s[k] < eps) {
                // balls below the cutoff are unknown, so admissibility cannot be certified
                rep.violations.push_back({static_cast<int>(i), static_cast<int>(k), -1, eps, s[i] * s[k]});
            }
    }
    auto D = tangency_bounds(orbits);
    for (std::size_t i = 0; i < p; ++i) {
        ScaleInterval iv;
        for (std::size_t k = 0; k < p; ++k) {
            double need = std::isnan(D[i][k]) ? eps : D[i][k];
            iv.lower = std::max(iv.lower, k == i ? std::sqrt(need) : need / s[k]);
        }
        rep.admissible.push_back(iv);
    }
    return rep;
}

} // namespace fordspine
