#pragma once

// Upper half-space model primitives: boundary points, horoballs,
// hemispheres, Mobius actions, distance and the Wildberger map.

#include <complex>
#include <vector>

#include "fordspine/error.hpp"

namespace fordspine {

using cplx = std::complex<double>;

inline constexpr double kEps = 1e-9;      // geometric coincidence
inline constexpr double kAlgEps = 1e-12;  // algebraic identities

// A point of the boundary plane, or the symbolic point at infinity.
class ComplexPoint {
public:
    ComplexPoint() = default;
    ComplexPoint(cplx z) : z_(z) {}
    ComplexPoint(double re, double im) : z_(re, im) {}

    static ComplexPoint infinity() {
        ComplexPoint p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinite() const { return infinite_; }
    cplx value() const;
    double re() const { return value().real(); }
    double im() const { return value().imag(); }

private:
    cplx z_{0.0, 0.0};
    bool infinite_ = false;
};

bool approx_equal(const ComplexPoint& a, const ComplexPoint& b, double tol = kEps);

struct UHPoint {
    cplx base;
    double height;
};

UHPoint make_uh_point(cplx base, double height);

// For an infinite center the diameter is the height of the bounding plane.
struct Horoball {
    ComplexPoint center;
    double diameter;
};

Horoball make_horoball(ComplexPoint center, double diameter);

struct HemisphereLabel {
    cplx center;
    double radius;

    double birth_time() const;
    double power(cplx x) const { return radius * radius - std::norm(x - center); }
};

HemisphereLabel make_label(cplx center, double radius);

class MobiusTransform {
public:
    MobiusTransform() : a_(1), b_(0), c_(0), d_(1) {}

    // Divides by a square root of the determinant and fixes the sign.
    static MobiusTransform normalized(cplx a, cplx b, cplx c, cplx d);
    static MobiusTransform translation(cplx t) { return normalized(1, t, 0, 1); }

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }

    MobiusTransform operator*(const MobiusTransform& o) const;
    MobiusTransform inverse() const;
    double distance_to(const MobiusTransform& o) const;  // max entry difference
    bool is_identity(double tol = 1e-9) const { return distance_to(MobiusTransform()) < tol; }

private:
    cplx a_, b_, c_, d_;
};

ComplexPoint apply_mobius(const MobiusTransform& t, const ComplexPoint& z);
UHPoint apply_mobius(const MobiusTransform& t, const UHPoint& x);
Horoball image_horoball(const MobiusTransform& t, const Horoball& h);
HemisphereLabel bisector_hemisphere(double h, const Horoball& ball);
double arrival_time(const HemisphereLabel& label, cplx x);
UHPoint wildberger(double tau, const UHPoint& x);
double hyperbolic_distance(const UHPoint& x, const UHPoint& y);

// Signed hyperbolic distance from x to a horosphere (negative inside the ball).
double distance_to_horosphere(const UHPoint& x, const Horoball& h);

struct HyperbolicPolygon {
    HemisphereLabel label;
    std::vector<UHPoint> vertices;
};

std::vector<cplx> vertical_projection(const HyperbolicPolygon& polygon);
HyperbolicPolygon lift_to_hemisphere(const HemisphereLabel& label, const std::vector<cplx>& vertices);

double polygon_area(const std::vector<cplx>& vertices);

} // namespace fordspine
