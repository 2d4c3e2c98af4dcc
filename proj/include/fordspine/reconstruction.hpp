#pragma once

#include <string>
#include <vector>

#include "fordspine/pairing.hpp"

namespace fordspine {

struct WeightedPoint {
    cplx p;
    double w = 0.0;
};

struct WeightedCusp {
    Lattice lattice;
    std::vector<WeightedPoint> points;
};

// Weight convention: w is the label radius r = exp(-t0) in the chart where the
// cusp torus sits at height 1.
struct WeightedPointSet {
    std::vector<WeightedCusp> cusps;
};

WeightedPointSet extract_weighted_points(const FordEnsemble& ensemble);

struct PointRef {
    int cusp = 0;
    int index = 0;
};

struct WeightDiagnosis {
    bool weights_in_range = true;
    bool distinct = true;
    bool covers = true;
    std::vector<std::string> failures;
    std::vector<PointRef> dominated;  // warnings only

    bool pass() const { return weights_in_range && distinct && covers; }
};

WeightDiagnosis validate_weighted_points(const WeightedPointSet& W);

struct ReconstructOptions {
    bool derive_pairing = true;
    double congruence_tolerance = 1e-8;
    std::size_t max_leaves = 100000;
};

// Pairing of every cell, indexed [cusp][cell].
using PairingAssignment = std::vector<std::vector<CellPairing>>;

struct Reconstruction {
    FordEnsemble ensemble;  // carries the first valid pairing
    std::vector<std::vector<HyperbolicPolygon>> lifted;  // per cusp, per cell
    std::vector<PointRef> dropped;                       // dominated points
    std::size_t pairing_candidates = 0;
    // Every pairing that passes congruence and closes around all edges. They
    // are all related by symmetries of the weighted points, else reconstruct
    // throws an ambiguity error.
    std::vector<PairingAssignment> equivalent_pairings;
};

Reconstruction reconstruct(const WeightedPointSet& W, const ReconstructOptions& options = {});

// Euclidean isometry x -> offset + u*x (or u*conj(x) when reversing) carrying
// the cells of one cusp torus onto those of another, labels included.
struct TorusSymmetry {
    int from = 0, to = 0;
    cplx offset{0, 0};
    cplx u{1, 0};
    bool reversing = false;
    std::vector<int> cell_map;

    cplx operator()(cplx x) const { return offset + u * (reversing ? std::conj(x) : x); }
};

std::vector<TorusSymmetry> cusp_symmetries(const FordTessellation& a, const FordTessellation& b);

// True when a symmetry of the tessellations conjugates one pairing into the other.
bool pairings_equivalent(const FordEnsemble& tessellations, const PairingAssignment& a, const PairingAssignment& b);

struct RoundTripReport {
    bool tessellation_match = false;  // cells, sides, adjacency, labels
    bool pairing_exact = false;       // the installed pairing equals the original
    bool pairing_recovered = false;   // the original is among the equivalent pairings
    bool combinatorial_match = false; // tessellation_match and pairing_recovered
    double max_vertex_deviation = 0.0;
    double max_radius_deviation = 0.0;
    std::string mismatch;
};

RoundTripReport compare_ensembles(const FordEnsemble& expected, const FordEnsemble& actual);
RoundTripReport round_trip_report(const FordEnsemble& original, const Reconstruction& rebuilt);

} // namespace fordspine
