#pragma once

#include <array>
#include <vector>

#include "fordspine/halfspace.hpp"

namespace fordspine {

struct LatticeShift {
    long m = 0;
    long n = 0;

    LatticeShift operator-() const { return {-m, -n}; }
    LatticeShift operator+(const LatticeShift& o) const { return {m + o.m, n + o.n}; }
    LatticeShift operator-(const LatticeShift& o) const { return {m - o.m, n - o.n}; }
    bool operator==(const LatticeShift&) const = default;
    auto operator<=>(const LatticeShift&) const = default;
};

// Translation lattice generated by two independent complex periods.
class Lattice {
public:
    Lattice() = default;
    Lattice(cplx l1, cplx l2);

    cplx l1() const { return l1_; }
    cplx l2() const { return l2_; }
    double area() const { return area_; }

    Lattice scaled(double factor) const { return Lattice(l1_ * factor, l2_ * factor); }

    cplx vector(const LatticeShift& s) const { return double(s.m) * l1_ + double(s.n) * l2_; }
    std::array<double, 2> coefficients(cplx z) const;

    // Shift s with z - vector(s) in the half-open fundamental parallelogram.
    LatticeShift floor_shift(cplx z) const;
    cplx reduce(cplx z) const { return z - vector(floor_shift(z)); }

    // Nearest lattice vector to z (by rounding coefficients, then local search).
    LatticeShift nearest_shift(cplx z) const;
    double distance_mod(cplx z, cplx w) const;

    // All shifts s with |center + vector(s)| <= radius.
    std::vector<LatticeShift> shifts_within(cplx center, double radius) const;

private:
    cplx l1_{1, 0}, l2_{0, 1};
    double area_ = 1.0;
};

} // namespace fordspine
