#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace fordspine;

namespace {

// Balls seen from cusp 0 of the figure-eight fixture, by brute force over all
// reduced words of length <= 8. The lattice is the rectangle 1 x 2 sqrt 3.
std::set<std::tuple<long, long, long>> word_oracle(const ManifoldPresentation& m, double eps, int max_len) {
    const double h = 2.0 * std::sqrt(3.0);
    std::set<std::tuple<long, long, long>> out;
    const std::string letters = "abAB";
    std::vector<std::string> frontier = {""};
    Horoball top = make_horoball(ComplexPoint::infinity(), 1.0);
    auto inverse = [](char x, char y) { return x != y && std::tolower(x) == std::tolower(y); };
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier)
            for (char c : letters) {
                if (!w.empty() && inverse(w.back(), c)) continue;
                std::string v = w + c;
                next.push_back(v);
                Horoball b = image_horoball(evaluate_word(m, v), top);
                if (b.center.is_infinite() || b.diameter < eps) continue;
                double x = b.center.re() - std::floor(b.center.re() + 1e-9);
                double y = b.center.im() - h * std::floor(b.center.im() / h + 1e-9);
                out.insert({std::lround(x * 1e6), std::lround(y * 1e6), std::lround(b.diameter * 1e6)});
            }
        frontier.swap(next);
    }
    return out;
}

std::set<std::tuple<long, long, long>> keys(const HoroballOrbit& o, double min_d) {
    const double h = 2.0 * std::sqrt(3.0);
    std::set<std::tuple<long, long, long>> out;
    for (const auto& e : o.entries) {
        if (e.ball.diameter < min_d) continue;
        double x = e.ball.center.re() - std::floor(e.ball.center.re() + 1e-9);
        double y = e.ball.center.im() - h * std::floor(e.ball.center.im() / h + 1e-9);
        out.insert({std::lround(x * 1e6), std::lround(y * 1e6), std::lround(e.ball.diameter * 1e6)});
    }
    return out;
}

} // namespace

TEST_CASE("trivial group has an empty orbit") {
    ManifoldPresentation m = parse_presentation(R"({"schema": "fordspine/manifold@1", "name": "trivial",
        "generators": [], "relators": [],
        "cusps": [{"conjugator": [1,0,0,0,0,0,1,0], "lattice": [[1,0],[0,1]]}]})");
    HoroballOrbit o = enumerate_horoballs(m, 0, 0.05);
    CHECK(o.entries.empty());
}

TEST_CASE("fixtures satisfy their relators and peripheral words") {
    for (const char* f : {"figure_eight", "whitehead"}) {
        auto c = check_presentation(load_presentation(support::fixture_path(f)));
        CHECK(c.relator_residual < 1e-12);
        CHECK(c.peripheral_residual < 1e-12);
    }
}

TEST_CASE("figure-eight orbit agrees with direct word enumeration") {
    const auto& F = support::fixture("figure_eight");
    const HoroballOrbit& o = F.od.orbits[0];
    auto oracle = word_oracle(F.m, 0.05, 8);
    auto found = keys(o, 0.05);
    CHECK(oracle.size() > 50);
    std::size_t missing = 0;
    for (const auto& k : oracle) missing += found.count(k) == 0;
    CHECK(missing == 0);
    // the large balls are reached by short words, so both counts agree there
    auto big_oracle = word_oracle(F.m, 0.2, 8);
    CHECK(keys(o, 0.2) == big_oracle);

    std::size_t unit = 0;
    for (const auto& e : o.entries) unit += std::abs(e.ball.diameter - 1.0) < 1e-12;
    CHECK(unit == 4);
}

TEST_CASE("orbit counts are stable under the cutoff") {
    const auto& a = support::fixture("figure_eight", 0.05);
    const auto& b = support::fixture("figure_eight", 0.1);
    CHECK(keys(a.od.orbits[0], 0.1) == keys(b.od.orbits[0], 0.1));
}

TEST_CASE("whitehead orbits see both cusps") {
    const auto& W = support::fixture("whitehead", 0.1);
    REQUIRE(W.od.orbits.size() == 2);
    for (const auto& o : W.od.orbits) {
        std::set<int> sources;
        for (const auto& e : o.entries) sources.insert(e.source_cusp);
        CHECK(sources.size() == 2);
    }
}

TEST_CASE("maximal cusp scale") {
    HoroballOrbit single;
    single.viewpoint = 0;
    single.entries.push_back({make_horoball(ComplexPoint(0, 0), 1.0), 0, {}, 0});
    CHECK(maximal_cusp_scale(single) == 1.0);

    // heights scale lengths by 1/h, so a ball of unit diameter d is tangent at h = sqrt(d)
    HoroballOrbit two = single;
    two.entries = {{make_horoball(ComplexPoint(0, 0), 0.5), 0, {}, 0}, {make_horoball(ComplexPoint(0.5, 0), 0.25), 0, {}, 0}};
    CHECK(maximal_cusp_scale(two) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

    const auto& F = support::fixture("figure_eight");
    double h = maximal_cusp_scale(F.od.orbits[0]);
    CHECK(std::abs(h - 1.0) < 1e-9);
    double dmax = 0.0;
    for (const auto& e : F.od.orbits[0].entries) dmax = std::max(dmax, e.ball.diameter / h);
    CHECK(std::abs(h - dmax) < 1e-9);  // the torus at height h touches its largest image
}

TEST_CASE("canonical family") {
    const auto& F = support::fixture("figure_eight");
    CHECK(F.od.family.sigma == 1.0);
    CHECK(F.od.family.scales.heights[0] == maximal_cusp_scale(F.od.orbits[0]));

    const auto& W = support::fixture("whitehead");
    const auto& fam = W.od.family;
    REQUIRE(fam.scales.heights.size() == 2);
    // the two cusps are exchanged by a symmetry of the link
    CHECK(fam.scales.heights[0] == doctest::Approx(fam.scales.heights[1]).epsilon(1e-12));
    auto rep = validate_scales(W.m, W.od.orbits, fam.scales);
    CHECK(rep.is_admissible());
    REQUIRE_FALSE(rep.tangencies.empty());
    bool cross = false;
    for (const auto& t : rep.tangencies) cross = cross || t.view != t.source;
    CHECK(cross);

    // growing the cusps past sigma breaks disjointness
    CuspScales past;
    for (double m : fam.maximal) past.heights.push_back(m / (fam.sigma + 1e-6));
    CHECK_FALSE(validate_scales(W.m, W.od.orbits, past).is_admissible());
}

TEST_CASE("validate scales") {
    const auto& F = support::fixture("figure_eight");
    CuspScales s = F.od.family.scales;
    auto ok = validate_scales(F.m, F.od.orbits, s);
    CHECK(ok.is_admissible());
    CHECK(ok.tangencies.size() >= 1);
    CHECK(ok.admissible.size() == 1);
    CHECK(ok.admissible[0].lower == doctest::Approx(s.heights[0]).epsilon(1e-12));

    auto doubled = validate_scales(F.m, F.od.orbits, s.scaled(0.5));
    CHECK_FALSE(doubled.is_admissible());
    for (const auto& v : doubled.violations) CHECK(v.product < v.required);

    CHECK_THROWS_AS(resolve_scales("1,2", F.od), Error);
    CHECK_THROWS_AS(resolve_scales("abc", F.od), Error);
    CHECK(resolve_scales("canonical", F.od, 2.0).heights[0] == doctest::Approx(0.5 * s.heights[0]));
}
