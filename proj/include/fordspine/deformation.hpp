#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "fordspine/pairing.hpp"

namespace fordspine {

// One cell after W_tau: its vertices stay over the same base points and sit on
// the hemisphere of radius sqrt(r^2 + tau^2) about the same center.
struct DeformedCell {
    int cusp = 0;
    int cell = 0;
    double radius = 0.0;
    std::vector<UHPoint> vertices;
    std::vector<double> lengths;  // side k joins vertex k to vertex k+1
    std::vector<double> angles;   // interior corner angles on the hemisphere
};

struct DeformedMetricData {
    double tau = 0.0;
    // Lengths multiplied by length_scale; curvature is -1/length_scale^2.
    bool curvature_rescaled = false;
    double length_scale = 1.0;
    std::vector<DeformedCell> cells;
    double pairing_residual = 0.0;  // max mismatch of lengths and angles across paired cells
};

DeformedCell deform_cell(const PolygonCell& cell, double tau);

// Applies W_tau to every lifted cell of the ensemble. With rescale set, lengths
// are multiplied by sqrt(1 + tau^2), i.e. curvature -1/(1 + tau^2).
DeformedMetricData deform_cells(const FordEnsemble& ensemble, double tau, bool rescale = false);

// Angle at q between the geodesics toward p and toward r, measured on the
// side facing the boundary plane. Points are in one vertical plane, given
// as (horizontal coordinate, height).
double boundary_side_angle(cplx p, cplx q, cplx r);

// Unit tangent at q of the geodesic from q to p, for points of the upper half space.
std::array<double, 3> geodesic_tangent(const UHPoint& q, const UHPoint& p);

// Two arcs meeting at Q: P = (X, a0) is the top of a semicircle about X
// through Q = (X + u, b0), and R = (X + u + v, c0) is the top of a semicircle
// about X + u + v through Q.
struct BentArcs {
    double X = 0.0, a0 = 0.0, u = 0.0, b0 = 0.0, v = 0.0, c0 = 0.0;

    static BentArcs from_heights(double X, double a0, double b0, double c0);
    cplx P(double tau) const;
    cplx Q(double tau) const;
    cplx R(double tau) const;
    double bending_angle(double tau) const;
    double length_pq(double tau) const;
    double length_qr(double tau) const;
};

BentArcs reference_bent_arcs();  // X = 0, a0 = 1.25, b0 = 1, c0 = 1.5

struct Series {
    std::string key;
    std::vector<double> values;
    double limit = 0.0;  // expected tau -> infinity value
};

struct ProfileReport {
    std::vector<double> taus;
    std::vector<Series> lengths;  // per cell side, limit 0
    std::vector<Series> bends;    // per Ford edge, boundary-side dihedral angle, limit pi
    std::vector<Series> corners;  // per cell corner, limit the Euclidean corner angle
    bool lengths_decreasing = true;
    bool bends_decreasing = true;
    bool corners_increasing = true;
};

// Throws property-violation when a length or bending angle fails to decrease
// beyond 1e-12 noise, or the grid is not increasing from 0.
ProfileReport angle_length_profile(const FordEnsemble& ensemble, const std::vector<double>& taus);

struct LimitReport {
    double tau = 0.0;
    double length_deviation = 0.0;  // max |rescaled length - Euclidean length|
    double angle_deviation = 0.0;   // max |corner angle - Euclidean corner angle|
    double deviation() const { return std::max(length_deviation, angle_deviation); }
};

LimitReport rescaled_limit(const FordEnsemble& ensemble, double tau);

} // namespace fordspine
