#include "fordspine/deformation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fordspine {

namespace {

constexpr double kNoise = 1e-12;

double cross2(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Tangent at q toward p in a vertical plane, coordinates (horizontal, height).
cplx planar_tangent(cplx q, cplx p) {
    double L = std::abs(p.real() - q.real());
    if (L == 0.0) return {0.0, p.imag() > q.imag() ? 1.0 : -1.0};
    double e = p.real() > q.real() ? 1.0 : -1.0;
    double m = (L * L + p.imag() * p.imag() - q.imag() * q.imag()) / (2.0 * L);
    cplx t{q.imag() * e, m};
    return t / std::abs(t);
}

double planar_distance(cplx a, cplx b) {
    return hyperbolic_distance(make_uh_point(a.real(), a.imag()), make_uh_point(b.real(), b.imag()));
}

} // namespace

std::array<double, 3> geodesic_tangent(const UHPoint& q, const UHPoint& p) {
    cplx d = p.base - q.base;
    double L = std::abs(d);
    if (L == 0.0) return {0.0, 0.0, p.height > q.height ? 1.0 : -1.0};
    cplx e = d / L;
    double m = (L * L + p.height * p.height - q.height * q.height) / (2.0 * L);
    std::array<double, 3> t{q.height * e.real(), q.height * e.imag(), m};
    double n = std::hypot(t[0], t[1], t[2]);
    for (double& x : t) x /= n;
    return t;
}

double boundary_side_angle(cplx p, cplx q, cplx r) {
    cplx t1 = planar_tangent(q, p), t2 = planar_tangent(q, r);
    double dot = std::clamp(std::real(t1 * std::conj(t2)), -1.0, 1.0);
    double theta = std::acos(dot);
    cplx down{0.0, -1.0};
    if (cross2(t1, t2) < 0.0) std::swap(t1, t2);
    bool down_inside = cross2(t1, down) >= 0.0 && cross2(down, t2) >= 0.0;
    return down_inside ? theta : 2.0 * std::numbers::pi - theta;
}

DeformedCell deform_cell(const PolygonCell& cell, double tau) {
    if (!(tau >= 0.0)) fail(ErrorKind::InvalidArgument, "tau must be nonnegative");
    DeformedCell out;
    out.cusp = cell.cusp;
    out.cell = cell.index;
    out.radius = std::sqrt(cell.label.radius * cell.label.radius + tau * tau);
    HyperbolicPolygon lifted = lift_cell(cell);
    for (const UHPoint& x : lifted.vertices) out.vertices.push_back(wildberger(tau, x));
    const std::size_t n = out.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const UHPoint& a = out.vertices[k];
        const UHPoint& b = out.vertices[(k + 1) % n];
        out.lengths.push_back(hyperbolic_distance(a, b));
        auto tp = geodesic_tangent(a, out.vertices[(k + n - 1) % n]);
        auto tn = geodesic_tangent(a, b);
        double dot = tp[0] * tn[0] + tp[1] * tn[1] + tp[2] * tn[2];
        out.angles.push_back(std::acos(std::clamp(dot, -1.0, 1.0)));
    }
    return out;
}

DeformedMetricData deform_cells(const FordEnsemble& E, double tau, bool rescale) {
    DeformedMetricData D;
    D.tau = tau;
    D.curvature_rescaled = rescale;
    D.length_scale = rescale ? std::sqrt(1.0 + tau * tau) : 1.0;
    std::vector<std::size_t> base;
    for (const auto& T : E.cusps) {
        base.push_back(D.cells.size());
        for (const auto& c : T.cells) {
            DeformedCell dc = deform_cell(c, tau);
            for (double& l : dc.lengths) l *= D.length_scale;
            D.cells.push_back(std::move(dc));
        }
    }
    for (const auto& T : E.cusps)
        for (const auto& c : T.cells) {
            if (!c.pairing) continue;
            const auto& A = D.cells[base[static_cast<std::size_t>(T.cusp)] + static_cast<std::size_t>(c.index)];
            const auto& B = D.cells[base[static_cast<std::size_t>(c.pairing->cusp)] + static_cast<std::size_t>(c.pairing->cell)];
            const auto& cm = c.pairing->corner_map;
            const std::size_t n = A.angles.size();
            if (B.angles.size() != n) fail(ErrorKind::GluingInconsistency, "paired cells differ in size");
            for (std::size_t k = 0; k < n; ++k) {
                D.pairing_residual = std::max(D.pairing_residual,
                                              std::abs(A.angles[k] - B.angles[static_cast<std::size_t>(cm[k])]));
                D.pairing_residual = std::max(D.pairing_residual,
                                              std::abs(A.lengths[k] - B.lengths[static_cast<std::size_t>(cm[(k + 1) % n])]));
            }
        }
    return D;
}

BentArcs BentArcs::from_heights(double X, double a0, double b0, double c0) {
    if (!(a0 > b0 && c0 > b0 && b0 > 0.0)) fail(ErrorKind::InvalidArgument, "need a0 > b0 and c0 > b0 > 0");
    BentArcs g;
    g.X = X;
    g.a0 = a0;
    g.b0 = b0;
    g.c0 = c0;
    g.u = std::sqrt(a0 * a0 - b0 * b0);
    g.v = std::sqrt(c0 * c0 - b0 * b0);
    return g;
}

cplx BentArcs::P(double tau) const { return {X, std::hypot(a0, tau)}; }
cplx BentArcs::Q(double tau) const { return {X + u, std::hypot(b0, tau)}; }
cplx BentArcs::R(double tau) const { return {X + u + v, std::hypot(c0, tau)}; }
double BentArcs::bending_angle(double tau) const { return boundary_side_angle(P(tau), Q(tau), R(tau)); }
double BentArcs::length_pq(double tau) const { return planar_distance(P(tau), Q(tau)); }
double BentArcs::length_qr(double tau) const { return planar_distance(Q(tau), R(tau)); }

BentArcs reference_bent_arcs() { return BentArcs::from_heights(0.0, 1.25, 1.0, 1.5); }

ProfileReport angle_length_profile(const FordEnsemble& E, const std::vector<double>& taus) {
    if (taus.empty() || taus.front() != 0.0) fail(ErrorKind::PropertyViolation, "tau grid must start at 0");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1])) fail(ErrorKind::PropertyViolation, "tau grid must be increasing");
    ProfileReport R;
    R.taus = taus;

    for (const auto& T : E.cusps) {
        for (const auto& c : T.cells)
            for (std::size_t k = 0; k < c.vertices.size(); ++k) {
                std::ostringstream a, b;
                a << "c" << T.cusp << "/cell" << c.index << "/side" << k;
                b << "c" << T.cusp << "/cell" << c.index << "/corner" << k;
                R.lengths.push_back({a.str(), {}, 0.0});
                R.corners.push_back({b.str(), {}, c.corner_angle(k)});
            }
        for (std::size_t e = 0; e < T.edges.size(); ++e) {
            std::ostringstream a;
            a << "c" << T.cusp << "/edge" << e;
            R.bends.push_back({a.str(), {}, std::numbers::pi});
        }
    }
    for (double tau : taus) {
        DeformedMetricData D = deform_cells(E, tau);
        std::size_t li = 0;
        for (const auto& dc : D.cells)
            for (std::size_t k = 0; k < dc.lengths.size(); ++k, ++li) {
                R.lengths[li].values.push_back(dc.lengths[k]);
                R.corners[li].values.push_back(dc.angles[k]);
            }
        std::size_t bi = 0;
        for (const auto& T : E.cusps)
            for (const auto& fe : T.edges)
                R.bends[bi++].values.push_back(2.0 * std::numbers::pi - ford_dihedral_angle(T, fe.cell_a, fe.side_a, tau));
    }

    auto check = [](const Series& s, bool increasing, bool& flag) {
        for (std::size_t i = 1; i < s.values.size(); ++i) {
            double step = s.values[i] - s.values[i - 1];
            if (increasing ? step < -kNoise : step > kNoise) return false;
            if (increasing ? !(step > 0.0) : !(step < 0.0)) flag = false;
        }
        return true;
    };
    for (const auto& s : R.lengths)
        if (!check(s, false, R.lengths_decreasing))
            fail(ErrorKind::PropertyViolation, "hyperbolic length increases along " + s.key);
    for (const auto& s : R.bends)
        if (!check(s, false, R.bends_decreasing))
            fail(ErrorKind::PropertyViolation, "bending angle increases along " + s.key);
    for (const auto& s : R.corners) {
        bool strict = true;
        if (!check(s, true, strict)) R.corners_increasing = false;
    }
    return R;
}

LimitReport rescaled_limit(const FordEnsemble& E, double tau) {
    LimitReport out;
    out.tau = tau;
    DeformedMetricData D = deform_cells(E, tau, true);
    std::size_t i = 0;
    for (const auto& T : E.cusps)
        for (const auto& c : T.cells) {
            const DeformedCell& dc = D.cells[i++];
            const std::size_t n = c.vertices.size();
            for (std::size_t k = 0; k < n; ++k) {
                double euclid = std::abs(c.vertices[(k + 1) % n] - c.vertices[k]);
                out.length_deviation = std::max(out.length_deviation, std::abs(dc.lengths[k] - euclid));
                out.angle_deviation = std::max(out.angle_deviation, std::abs(dc.angles[k] - c.corner_angle(k)));
            }
        }
    return out;
}

} // namespace fordspine
