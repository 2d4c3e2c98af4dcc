#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace fordspine;

namespace {

const FordEnsemble& strict(const char* f) {
    static std::map<std::string, std::shared_ptr<const FordEnsemble>> cache;
    auto& slot = cache[f];
    if (!slot) {
        const auto& l = support::fixture(f);
        slot = extraction_ensemble(l.m, l.od, support::canonical_result(f));
    }
    return *slot;
}

} // namespace

TEST_CASE("extraction encodes labels directly") {
    FordEnsemble E;
    FordTessellation T;
    T.lattice = Lattice({1, 0}, {0, 1});
    PolygonCell c;
    c.label = make_label({0, 0}, 0.5);
    c.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    T.cells.push_back(c);
    E.cusps.push_back(T);
    WeightedPointSet W = extract_weighted_points(E);
    REQUIRE(W.cusps.size() == 1);
    REQUIRE(W.cusps[0].points.size() == 1);
    CHECK(W.cusps[0].points[0].p == cplx(0, 0));
    CHECK(W.cusps[0].points[0].w == 0.5);

    E.cusps[0].cells[0].label.radius = 1.0;
    CHECK_THROWS_AS(extract_weighted_points(E), Error);
}

TEST_CASE("fixture weights are equal and inside (0, 1)") {
    WeightedPointSet W = extract_weighted_points(strict("figure_eight"));
    REQUIRE(W.cusps[0].points.size() == 4);
    double w0 = W.cusps[0].points[0].w;
    for (const auto& p : W.cusps[0].points) {
        CHECK(std::abs(p.w - w0) < 1e-9);
        CHECK(p.w > 0.0);
        CHECK(p.w < 1.0);
    }
    for (const auto& c : extract_weighted_points(strict("whitehead")).cusps)
        for (const auto& p : c.points) {
            CHECK(p.w > 0.0);
            CHECK(p.w < 1.0);
        }
}

TEST_CASE("round trip on both fixtures") {
    for (const char* f : {"figure_eight", "whitehead"}) {
        const FordEnsemble& E = strict(f);
        WeightedPointSet W = extract_weighted_points(E);
        CHECK(validate_weighted_points(W).pass());
        Reconstruction R = reconstruct(W);
        RoundTripReport rt = round_trip_report(E, R);
        CHECK(rt.tessellation_match);
        CHECK(rt.pairing_recovered);
        CHECK(rt.combinatorial_match);
        CHECK(rt.max_vertex_deviation < 1e-9);
        CHECK(rt.max_radius_deviation < 1e-9);
        // every accepted pairing is a symmetry image of the installed one
        for (const auto& p : R.equivalent_pairings) CHECK(pairings_equivalent(R.ensemble, R.equivalent_pairings[0], p));
        // the lifted polygons sit on their hemispheres
        for (std::size_t i = 0; i < R.lifted.size(); ++i)
            for (std::size_t j = 0; j < R.lifted[i].size(); ++j) {
                const auto& P = R.lifted[i][j];
                for (const auto& v : P.vertices)
                    CHECK(std::norm(v.base - P.label.center) + v.height * v.height ==
                          doctest::Approx(P.label.radius * P.label.radius).epsilon(1e-12));
            }
    }
}

TEST_CASE("a single point gives a one-cell torus") {
    WeightedPointSet W;
    W.cusps.push_back({Lattice({1, 0}, {0, 1}), {{{0, 0}, 0.8}}});
    ReconstructOptions opt;
    opt.derive_pairing = false;
    Reconstruction R = reconstruct(W, opt);
    REQUIRE(R.ensemble.cusps[0].cells.size() == 1);
    const PolygonCell& c = R.ensemble.cusps[0].cells[0];
    CHECK(c.label.center == cplx(0, 0));
    CHECK(c.label.radius == 0.8);
    CHECK(c.area() == doctest::Approx(1.0));
}

TEST_CASE("a dominated point is dropped and changes nothing") {
    const FordEnsemble& E = strict("figure_eight");
    WeightedPointSet W = extract_weighted_points(E);
    Reconstruction base = reconstruct(W);

    // a small circle born inside a large cell, never reaching its boundary
    WeightedPointSet more = W;
    const WeightedPoint& host = more.cusps[0].points[0];
    WeightedPoint inner{host.p + cplx(0.01, 0.02), 0.1};
    more.cusps[0].points.push_back(inner);
    WeightDiagnosis d = validate_weighted_points(more);
    CHECK(d.pass());
    REQUIRE(d.dominated.size() == 1);
    CHECK(d.dominated[0].index == static_cast<int>(more.cusps[0].points.size()) - 1);

    // grid oracle: the added point never has the largest power
    const Lattice& L = more.cusps[0].lattice;
    int owned = 0;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
            cplx x = (i + 0.5) / 200 * L.l1() + (j + 0.5) / 200 * L.l2();
            double best = -1e300, mine = -1e300;
            for (std::size_t k = 0; k < more.cusps[0].points.size(); ++k)
                for (int m = -2; m <= 2; ++m)
                    for (int n = -2; n <= 2; ++n) {
                        const auto& p = more.cusps[0].points[k];
                        double pw = p.w * p.w - std::norm(x - p.p - L.vector({m, n}));
                        if (k + 1 == more.cusps[0].points.size())
                            mine = std::max(mine, pw);
                        else
                            best = std::max(best, pw);
                    }
            owned += mine > best;
        }
    CHECK(owned == 0);

    Reconstruction R = reconstruct(more);
    CHECK(R.dropped.size() == 1);
    RoundTripReport rt = compare_ensembles(base.ensemble, R.ensemble);
    CHECK(rt.tessellation_match);
    CHECK(rt.max_vertex_deviation < 1e-12);
}

TEST_CASE("validation failures") {
    WeightedPointSet gap;
    gap.cusps.push_back({Lattice({2, 0}, {0, 2}), {{{0, 0}, 0.3}, {{1, 1}, 0.3}}});
    WeightDiagnosis d = validate_weighted_points(gap);
    CHECK_FALSE(d.covers);
    CHECK_FALSE(d.pass());
    CHECK_THROWS_AS(reconstruct(gap), Error);

    WeightedPointSet heavy;
    heavy.cusps.push_back({Lattice({1, 0}, {0, 1}), {{{0, 0}, 1.2}}});
    CHECK_FALSE(validate_weighted_points(heavy).weights_in_range);

    WeightedPointSet twin;
    twin.cusps.push_back({Lattice({1, 0}, {0, 1}), {{{0, 0}, 0.8}, {{1, 0}, 0.8}}});
    CHECK_FALSE(validate_weighted_points(twin).distinct);
}

TEST_CASE("weighted-point files round trip") {
    WeightedPointSet W = extract_weighted_points(strict("whitehead"));
    json j = weighted_points_json(W, PointSource{"whitehead", {1.0, 1.0}, 0.05});
    WeightedPointSet back = parse_weighted_points(json::parse(dump(j)));
    REQUIRE(back.cusps.size() == W.cusps.size());
    for (std::size_t i = 0; i < W.cusps.size(); ++i) {
        REQUIRE(back.cusps[i].points.size() == W.cusps[i].points.size());
        for (std::size_t k = 0; k < W.cusps[i].points.size(); ++k) {
            CHECK(back.cusps[i].points[k].p == W.cusps[i].points[k].p);
            CHECK(back.cusps[i].points[k].w == W.cusps[i].points[k].w);
        }
    }
    auto src = parse_point_source(j);
    REQUIRE(src.has_value());
    CHECK(src->fixture == "whitehead");
    CHECK_THROWS_AS(parse_weighted_points(json{{"schema", "nope"}}), Error);
}
