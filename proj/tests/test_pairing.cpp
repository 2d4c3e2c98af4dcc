#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace fordspine;

namespace {

void check_pairings_by_hand(const FordEnsemble& E) {
    for (const auto& T : E.cusps)
        for (const auto& a : T.cells) {
            REQUIRE(a.pairing.has_value());
            const CellPairing& p = *a.pairing;
            const PolygonCell& b = E.cell(p.cusp, p.cell);
            CHECK(std::abs(std::abs(p.map.mu) - 1.0) < 1e-12);
            CHECK(std::abs(a.label.radius - b.label.radius) < 1e-9);
            // the reflection carries the label center and the vertex set across
            CHECK(std::abs(p.map(a.label.center) - b.label.center) < 1e-9);
            REQUIRE(a.vertices.size() == b.vertices.size());
            for (cplx v : a.vertices) {
                double best = 1e300;
                for (cplx w : b.vertices) best = std::min(best, std::abs(p.map(v) - w));
                CHECK(best < 1e-9);
            }
            const CellPairing& back = *b.pairing;
            CHECK(back.cusp == T.cusp);
            CHECK(back.cell == a.index);
        }
}

} // namespace

TEST_CASE("figure-eight pairings") {
    const auto& r = support::canonical_result("figure_eight");
    CHECK(r.pairing.involutive);
    CHECK(r.pairing.max_residual < 1e-9);
    CHECK(r.pairing.max_radius_gap < 1e-9);
    check_pairings_by_hand(*r.ensemble);
}

TEST_CASE("whitehead pairings cross between the cusps") {
    const auto& r = support::canonical_result("whitehead");
    CHECK(r.pairing.involutive);
    check_pairings_by_hand(*r.ensemble);
    bool cross = false;
    for (const auto& T : r.ensemble->cusps)
        for (const auto& c : T.cells) cross = cross || c.pairing->cusp != T.cusp;
    CHECK(cross);
}

TEST_CASE("pairing mobius maps one label circle onto the other") {
    for (const char* f : {"figure_eight", "whitehead"}) {
        const auto& E = *support::canonical_result(f).ensemble;
        for (const auto& T : E.cusps)
            for (const auto& a : T.cells) {
                const PolygonCell& b = E.cell(a.pairing->cusp, a.pairing->cell);
                MobiusTransform G = pairing_mobius(a, b);
                for (int k = 0; k < 8; ++k) {
                    cplx z = a.label.center + a.label.radius * std::polar(1.0, 0.3 + k * std::numbers::pi / 4);
                    ComplexPoint w = apply_mobius(G, ComplexPoint(z));
                    REQUIRE_FALSE(w.is_infinite());
                    CHECK(std::abs(std::abs(w.value() - b.label.center) - b.label.radius) < 1e-9);
                }
                // the label center goes to infinity
                CHECK(apply_mobius(G, ComplexPoint(a.label.center)).is_infinite());
            }
    }
}

TEST_CASE("edge cycles close up with total angle 2 pi") {
    for (const char* f : {"figure_eight", "whitehead"}) {
        const auto& r = support::canonical_result(f);
        REQUIRE_FALSE(r.cycles.empty());
        for (const auto& c : r.cycles) {
            CHECK(c.holonomy_error < 1e-8);
            CHECK(std::abs(c.angle_sum - 2.0 * std::numbers::pi) < 1e-9);
            CHECK(c.occurrences.size() >= 3);
        }
    }
}

TEST_CASE("ideal dual cells") {
    const auto& r = support::canonical_result("figure_eight");
    REQUIRE(r.duals.size() == 2);
    for (const auto& X : r.duals) {
        CHECK(X.parabolic_points.size() == 4);
        CHECK(X.parabolic_points[0].is_infinite());
    }
    const auto& w = support::canonical_result("whitehead");
    CHECK(w.duals.size() == 4);
    for (const auto& X : w.duals) CHECK(X.parabolic_points.size() == 4);
}

TEST_CASE("dual cells collect every horoball equidistant from the Ford vertex") {
    // At this ratio some labels have zero-area cells through a Ford vertex: the
    // vertex then sees four horoballs plus infinity.
    const auto& W = support::fixture("whitehead");
    CuspScales s = maximal_admissible(W.od, {std::sqrt(0.4), 1.0 / std::sqrt(0.4)});
    FordEnsemble E = build_ensemble(W.m, W.od.orbits, s);
    bool seen = false;
    for (const auto& X : dual_cells(E)) {
        const FordTessellation& T = E.cusps[static_cast<std::size_t>(X.chart.cusp)];
        const FordVertex& v = T.vertices[static_cast<std::size_t>(X.chart.vertex)];
        std::size_t through = 0;
        for (const auto& site : candidate_sites(W.od.orbits[static_cast<std::size_t>(X.chart.cusp)], s))
            for (int m = -3; m <= 3; ++m)
                for (int n = -3; n <= 3; ++n) {
                    cplx c = site.label.center + T.lattice.vector({m, n});
                    double p = site.label.radius * site.label.radius - std::norm(X.position - c);
                    through += std::abs(p - v.height * v.height) < 1e-9;
                }
        CHECK(X.parabolic_points.size() == through + 1);
        seen = seen || through > v.corners.size();
    }
    CHECK(seen);
}
