#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "fordspine/halfspace.hpp"

using namespace fordspine;

namespace {

MobiusTransform mat(cplx a, cplx b, cplx c, cplx d) { return MobiusTransform::normalized(a, b, c, d); }

// Fit a horoball through four points of the upper half space: a sphere tangent
// to the boundary at p with diameter D satisfies |b - p|^2 + h^2 - h D = 0.
// Subtracting the first equation from the others leaves a linear system in (p, D).
std::pair<cplx, double> fit_horoball(const std::array<UHPoint, 4>& q) {
    double A[3][4];
    auto row = [&](const UHPoint& u, double* out) {
        out[0] = -2.0 * u.base.real();
        out[1] = -2.0 * u.base.imag();
        out[2] = -u.height;
        out[3] = -(std::norm(u.base) + u.height * u.height);
    };
    double r0[4];
    row(q[0], r0);
    for (int i = 0; i < 3; ++i) {
        double ri[4];
        row(q[i + 1], ri);
        for (int k = 0; k < 4; ++k) A[i][k] = ri[k] - r0[k];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        for (int k = 0; k < 4; ++k) std::swap(A[c][k], A[piv][k]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double f = A[r][c] / A[c][c];
            for (int k = c; k < 4; ++k) A[r][k] -= f * A[c][k];
        }
    }
    return {{A[0][3] / A[0][0], A[1][3] / A[1][1]}, A[2][3] / A[2][2]};
}

// Signed distance to the horosphere of height h about infinity, and to a
// horosphere at p of diameter D, from their closed forms.
double dist_top(const UHPoint& x, double h) { return std::log(h / x.height); }
double dist_ball(const UHPoint& x, cplx p, double D) {
    return std::log((std::norm(x.base - p) + x.height * x.height) / (D * x.height));
}

} // namespace

TEST_CASE("mobius action on boundary points") {
    auto z = apply_mobius(MobiusTransform(), ComplexPoint(1, 1));
    CHECK(approx_equal(z, ComplexPoint(1, 1), 1e-15));
    CHECK(apply_mobius(mat(1, 1, 0, 1), ComplexPoint::infinity()).is_infinite());
    CHECK(approx_equal(apply_mobius(mat(1, 0, 1, 1), ComplexPoint::infinity()), ComplexPoint(1, 0), 1e-15));
    CHECK(apply_mobius(mat(1, 0, 1, 1), ComplexPoint(-1, 0)).is_infinite());
}

TEST_CASE("image of the horoball at infinity matches a four point fit") {
    Horoball top = make_horoball(ComplexPoint::infinity(), 1.0);
    auto same = image_horoball(MobiusTransform(), top);
    CHECK(same.center.is_infinite());
    CHECK(same.diameter == doctest::Approx(1.0).epsilon(1e-15));

    struct Case {
        MobiusTransform t;
        cplx center;
        double diameter;
    };
    for (const Case& k : {Case{mat(1, 0, 1, 1), {1, 0}, 1.0}, Case{mat(1, 0, 2, 1), {0.5, 0}, 0.25},
                          Case{mat(cplx(2, 1), cplx(0.3, -1), cplx(1, 1), cplx(0.6, 0.2)), {}, 0.0}}) {
        Horoball img = image_horoball(k.t, top);
        std::array<UHPoint, 4> q{};
        const cplx pts[4] = {{0.1, 0.2}, {1.7, -0.4}, {-0.9, 1.3}, {0.4, 2.2}};
        for (int i = 0; i < 4; ++i) q[i] = apply_mobius(k.t, make_uh_point(pts[i], 1.0));
        auto [p, D] = fit_horoball(q);
        REQUIRE_FALSE(img.center.is_infinite());
        CHECK(std::abs(img.center.value() - p) < 1e-10);
        CHECK(img.diameter == doctest::Approx(D).epsilon(1e-10));
        if (k.diameter > 0.0) {
            CHECK(std::abs(img.center.value() - k.center) < 1e-12);
            CHECK(img.diameter == doctest::Approx(k.diameter).epsilon(1e-12));
        }
    }
}

TEST_CASE("bisector hemisphere is equidistant from both horospheres") {
    auto L = bisector_hemisphere(1.0, make_horoball(ComplexPoint(0, 0), 1.0));
    CHECK(std::abs(L.center) < 1e-15);
    CHECK(L.radius == doctest::Approx(1.0));

    struct Case {
        double h;
        cplx p;
        double D, r;
    };
    for (const Case& k : {Case{1.0, {0, 0}, 0.25, 0.5}, Case{4.0, {2, 0}, 1.0, 2.0}, Case{0.7, {0.3, -1.1}, 0.33, 0.0}}) {
        auto lab = bisector_hemisphere(k.h, make_horoball(ComplexPoint(k.p), k.D));
        CHECK(std::abs(lab.center - k.p) < 1e-14);
        if (k.r > 0.0) CHECK(lab.radius == doctest::Approx(k.r).epsilon(1e-14));
        for (int s = 0; s < 20; ++s) {
            double phi = 2.0 * std::numbers::pi * s / 20.0, theta = 0.05 + 1.4 * s / 20.0;
            cplx dir = std::polar(1.0, phi);
            UHPoint x = make_uh_point(lab.center + lab.radius * std::cos(theta) * dir, lab.radius * std::sin(theta));
            CHECK(std::abs(dist_top(x, k.h) - dist_ball(x, k.p, k.D)) < 1e-12);
            CHECK(std::abs(distance_to_horosphere(x, make_horoball(ComplexPoint::infinity(), k.h)) - dist_top(x, k.h)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(bisector_hemisphere(0.0, make_horoball(ComplexPoint(0, 0), 1.0)), Error);
}

TEST_CASE("arrival times of the expanding circles") {
    HemisphereLabel L = make_label({0, 0}, 1.0);
    CHECK(arrival_time(L, {0, 0}) == doctest::Approx(0.0));
    double x = std::sqrt(1.0 - std::exp(-2.0));
    CHECK(arrival_time(L, {x, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(arrival_time(L, {0, x}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(arrival_time(L, {1, 0}), Error);
    CHECK(make_label({0, 0}, 0.5).birth_time() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("wildberger map") {
    UHPoint p = wildberger(0.0, make_uh_point({0, 0}, 1.0));
    CHECK(p.height == 1.0);
    CHECK(std::abs(p.base) == 0.0);
    UHPoint q = wildberger(1.0, make_uh_point({0.3, -2}, 1.0));
    CHECK(q.height == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(q.base == cplx(0.3, -2));
    CHECK_THROWS_AS(wildberger(-1.0, make_uh_point({0, 0}, 1.0)), Error);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int arc = 0; arc < 100; ++arc) {
        cplx X{4 * U(rng) - 2, 4 * U(rng) - 2};
        double a = 0.05 + 3 * U(rng), tau = 5 * U(rng);
        cplx dir = std::polar(1.0, 2 * std::numbers::pi * U(rng));
        for (int s = 1; s < 10; ++s) {
            double t = std::numbers::pi * s / 10.0;
            UHPoint w = wildberger(tau, make_uh_point(X + a * std::cos(t) * dir, a * std::sin(t)));
            double res = std::abs(std::norm(w.base - X) + w.height * w.height - (a * a + tau * tau)) / (a * a + tau * tau);
            worst = std::max(worst, res);
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("vertical projection and lifting") {
    HemisphereLabel L = make_label({0, 0}, 1.0);
    double s = 1.0 / std::sqrt(2.0);
    HyperbolicPolygon arc{L, {make_uh_point({-s, 0}, s), make_uh_point({s, 0}, s)}};
    auto seg = vertical_projection(arc);
    REQUIRE(seg.size() == 2);
    CHECK(seg[0] == cplx(-s, 0));
    CHECK(seg[1] == cplx(s, 0));
    CHECK(vertical_projection(HyperbolicPolygon{L, {make_uh_point({0, 0}, 1)}}).size() == 1);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        HemisphereLabel lab = make_label({U(rng), U(rng)}, 0.1 + U(rng));
        std::vector<cplx> poly;
        int n = 3 + k % 5;
        for (int i = 0; i < n; ++i)
            poly.push_back(lab.center + 0.99 * lab.radius * U(rng) * std::polar(1.0, 2 * std::numbers::pi * i / n));
        auto back = vertical_projection(lift_to_hemisphere(lab, poly));
        for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - poly[i]) < 1e-12);
    }
    CHECK_THROWS_AS(lift_to_hemisphere(L, {cplx(2, 0)}), Error);
}

TEST_CASE("hyperbolic distance") {
    CHECK(hyperbolic_distance(make_uh_point({0, 0}, 1), make_uh_point({0, 0}, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hyperbolic_distance(make_uh_point({1, 2}, 0.5), make_uh_point({1, 2}, 0.5)) == 0.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto rp = [&] { return make_uh_point({4 * U(rng) - 2, 4 * U(rng) - 2}, 0.01 + 3 * U(rng)); };
    for (int k = 0; k < 1000; ++k) {
        UHPoint a = rp(), b = rp(), c = rp();
        double ab = hyperbolic_distance(a, b), bc = hyperbolic_distance(b, c), ac = hyperbolic_distance(a, c);
        CHECK(ac <= ab + bc + 1e-9);
        CHECK(ab == doctest::Approx(hyperbolic_distance(b, a)));
    }
}
