#include "fordspine/lattice.hpp"

#include <cmath>
#include <limits>

namespace fordspine {

Lattice::Lattice(cplx l1, cplx l2) : l1_(l1), l2_(l2) {
    area_ = std::abs((std::conj(l1) * l2).imag());
    if (!(area_ > 1e-12 * std::max(std::norm(l1), std::norm(l2))))
        fail(ErrorKind::InvalidArgument, "lattice periods are not independent");
}

std::array<double, 2> Lattice::coefficients(cplx z) const {
    // Solve z = u l1 + v l2 with Cramer's rule over the reals.
    double det = l1_.real() * l2_.imag() - l1_.imag() * l2_.real();
    double u = (z.real() * l2_.imag() - z.imag() * l2_.real()) / det;
    double v = (l1_.real() * z.imag() - l1_.imag() * z.real()) / det;
    return {u, v};
}

LatticeShift Lattice::floor_shift(cplx z) const {
    auto [u, v] = coefficients(z);
    auto fl = [](double x) {
        double f = std::floor(x);
        if (x - f > 1.0 - 1e-11) f += 1.0;  // snap values a hair below an integer
        return static_cast<long>(f);
    };
    return {fl(u), fl(v)};
}

LatticeShift Lattice::nearest_shift(cplx z) const {
    auto [u, v] = coefficients(z);
    LatticeShift base{static_cast<long>(std::lround(u)), static_cast<long>(std::lround(v))};
    LatticeShift best = base;
    double best_d = std::numeric_limits<double>::infinity();
    for (long dm = -1; dm <= 1; ++dm)
        for (long dn = -1; dn <= 1; ++dn) {
            LatticeShift s{base.m + dm, base.n + dn};
            double d = std::abs(z - vector(s));
            if (d < best_d) {
                best_d = d;
                best = s;
            }
        }
    return best;
}

double Lattice::distance_mod(cplx z, cplx w) const {
    cplx d = z - w;
    return std::abs(d - vector(nearest_shift(d)));
}

std::vector<LatticeShift> Lattice::shifts_within(cplx center, double radius) const {
    std::vector<LatticeShift> out;
    if (radius < 0) return out;
    // Coefficient ranges from the widths of the parallelogram strips.
    double h1 = area_ / std::abs(l2_);
    double h2 = area_ / std::abs(l1_);
    auto [u0, v0] = coefficients(-center);
    long m_lo = static_cast<long>(std::floor(u0 - radius / h1)) - 1;
    long m_hi = static_cast<long>(std::ceil(u0 + radius / h1)) + 1;
    long n_lo = static_cast<long>(std::floor(v0 - radius / h2)) - 1;
    long n_hi = static_cast<long>(std::ceil(v0 + radius / h2)) + 1;
    for (long m = m_lo; m <= m_hi; ++m)
        for (long n = n_lo; n <= n_hi; ++n) {
            LatticeShift s{m, n};
            if (std::abs(center + vector(s)) <= radius) out.push_back(s);
        }
    return out;
}

} // namespace fordspine
