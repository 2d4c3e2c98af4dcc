#include "fordspine/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fordspine {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfDisk: return "out-of-disk";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::EnumerationDiverged: return "enumeration-diverged";
    case ErrorKind::IncompleteOrbit: return "incomplete-orbit";
    case ErrorKind::CutoffTooCoarse: return "cutoff-too-coarse";
    case ErrorKind::PairingFailure: return "pairing-failure";
    case ErrorKind::CongruenceFailure: return "congruence-failure";
    case ErrorKind::GluingInconsistency: return "gluing-inconsistency";
    case ErrorKind::GeometryInconsistency: return "geometry-inconsistency";
    case ErrorKind::MalformedComplex: return "malformed-complex";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Ambiguity: return "ambiguity";
    case ErrorKind::ValidationFailed: return "validation-failed";
    case ErrorKind::PropertyViolation: return "property-violation";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

cplx ComplexPoint::value() const {
    if (infinite_) fail(ErrorKind::InvalidArgument, "finite value requested for the point at infinity");
    return z_;
}

bool approx_equal(const ComplexPoint& a, const ComplexPoint& b, double tol) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return std::abs(a.value() - b.value()) <= tol;
}

UHPoint make_uh_point(cplx base, double height) {
    if (!(height > 0.0) || !std::isfinite(height))
        fail(ErrorKind::InvalidArgument, "upper half-space point needs positive height");
    return {base, height};
}

Horoball make_horoball(ComplexPoint center, double diameter) {
    if (!(diameter > 0.0) || !std::isfinite(diameter))
        fail(ErrorKind::InvalidArgument, "horoball diameter must be positive");
    return {center, diameter};
}

double HemisphereLabel::birth_time() const { return -std::log(radius); }

HemisphereLabel make_label(cplx center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        fail(ErrorKind::InvalidArgument, "label radius must be positive");
    return {center, radius};
}

MobiusTransform MobiusTransform::normalized(cplx a, cplx b, cplx c, cplx d) {
    cplx det = a * d - b * c;
    if (std::abs(det) < 1e-300) fail(ErrorKind::InvalidArgument, "singular Mobius matrix");
    cplx s = std::sqrt(det);
    MobiusTransform t;
    t.a_ = a / s;
    t.b_ = b / s;
    t.c_ = c / s;
    t.d_ = d / s;
    double scale = std::max({std::abs(t.a_), std::abs(t.b_), std::abs(t.c_), std::abs(t.d_)});
    for (cplx e : {t.a_, t.b_, t.c_, t.d_}) {
        if (std::abs(e) <= 1e-14 * scale) continue;
        double arg = std::arg(e);
        if (arg <= -std::numbers::pi / 2 || arg > std::numbers::pi / 2) {
            t.a_ = -t.a_;
            t.b_ = -t.b_;
            t.c_ = -t.c_;
            t.d_ = -t.d_;
        }
        break;
    }
    return t;
}

MobiusTransform MobiusTransform::operator*(const MobiusTransform& o) const {
    return normalized(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                      c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

MobiusTransform MobiusTransform::inverse() const { return normalized(d_, -b_, -c_, a_); }

double MobiusTransform::distance_to(const MobiusTransform& o) const {
    return std::max({std::abs(a_ - o.a_), std::abs(b_ - o.b_), std::abs(c_ - o.c_),
                     std::abs(d_ - o.d_)});
}

namespace {

bool negligible_c(const MobiusTransform& t) {
    double scale = std::max({std::abs(t.a()), std::abs(t.b()), std::abs(t.d()), 1.0});
    return std::abs(t.c()) <= 1e-14 * scale;
}

} // namespace

ComplexPoint apply_mobius(const MobiusTransform& t, const ComplexPoint& z) {
    if (z.is_infinite()) {
        if (negligible_c(t)) return ComplexPoint::infinity();
        return t.a() / t.c();
    }
    cplx den = t.c() * z.value() + t.d();
    cplx num = t.a() * z.value() + t.b();
    if (std::abs(den) <= 1e-15 * std::max(1.0, std::abs(num))) return ComplexPoint::infinity();
    return num / den;
}

UHPoint apply_mobius(const MobiusTransform& t, const UHPoint& x) {
    cplx w = t.c() * x.base + t.d();
    double s = x.height * x.height;
    double den = std::norm(w) + std::norm(t.c()) * s;
    cplx base = ((t.a() * x.base + t.b()) * std::conj(w) + t.a() * std::conj(t.c()) * s) / den;
    return {base, x.height / den};
}

Horoball image_horoball(const MobiusTransform& t, const Horoball& h) {
    if (h.center.is_infinite()) {
        if (negligible_c(t)) return {ComplexPoint::infinity(), h.diameter * std::norm(t.a())};
        return {t.a() / t.c(), 1.0 / (h.diameter * std::norm(t.c()))};
    }
    cplx x = h.center.value();
    cplx w = t.c() * x + t.d();
    if (std::abs(w) <= 1e-15 * std::max(1.0, std::abs(t.a() * x + t.b())))
        return {ComplexPoint::infinity(), 1.0 / (h.diameter * std::norm(t.c()))};
    return {(t.a() * x + t.b()) / w, h.diameter / std::norm(w)};
}

HemisphereLabel bisector_hemisphere(double h, const Horoball& ball) {
    if (ball.center.is_infinite())
        fail(ErrorKind::InvalidArgument, "bisector needs a finite horoball");
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "plane height must be positive");
    return make_label(ball.center.value(), std::sqrt(h * ball.diameter));
}

double arrival_time(const HemisphereLabel& label, cplx x) {
    double p = label.power(x);
    if (!(p > 0.0)) fail(ErrorKind::OutOfDisk, "point is not inside the label disk");
    return -0.5 * std::log(p);
}

UHPoint wildberger(double tau, const UHPoint& x) {
    if (tau < 0.0) fail(ErrorKind::InvalidArgument, "tau must be nonnegative");
    if (tau == 0.0) return x;
    return {x.base, std::hypot(x.height, tau)};
}

double hyperbolic_distance(const UHPoint& x, const UHPoint& y) {
    double chord = std::sqrt(std::norm(x.base - y.base) + (x.height - y.height) * (x.height - y.height));
    return 2.0 * std::asinh(chord / (2.0 * std::sqrt(x.height * y.height)));
}

double distance_to_horosphere(const UHPoint& x, const Horoball& h) {
    if (h.center.is_infinite()) return std::log(h.diameter / x.height);
    double q = std::norm(x.base - h.center.value()) + x.height * x.height;
    return std::log(q / (h.diameter * x.height));
}

std::vector<cplx> vertical_projection(const HyperbolicPolygon& polygon) {
    std::vector<cplx> out;
    out.reserve(polygon.vertices.size());
    const auto& L = polygon.label;
    for (const auto& v : polygon.vertices) {
        double residual = std::norm(v.base - L.center) + v.height * v.height - L.radius * L.radius;
        if (std::abs(residual) > kEps * std::max(1.0, L.radius * L.radius))
            fail(ErrorKind::Inconsistency, "polygon vertex is off its hemisphere");
        out.push_back(v.base);
    }
    return out;
}

HyperbolicPolygon lift_to_hemisphere(const HemisphereLabel& label, const std::vector<cplx>& vertices) {
    HyperbolicPolygon poly{label, {}};
    poly.vertices.reserve(vertices.size());
    for (cplx v : vertices) {
        double p = label.power(v);
        if (p < -kEps) fail(ErrorKind::Inconsistency, "vertex lies outside the label disk");
        // A vertex on the boundary circle would sit at height zero; keep it on the model.
        poly.vertices.push_back({v, std::sqrt(std::max(p, 0.0))});
    }
    return poly;
}

double polygon_area(const std::vector<cplx>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx& p = v[i];
        const cplx& q = v[(i + 1) % v.size()];
        a += p.real() * q.imag() - p.imag() * q.real();
    }
    return 0.5 * a;
}

} // namespace fordspine
