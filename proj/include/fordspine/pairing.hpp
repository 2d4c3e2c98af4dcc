#pragma once

#include <vector>

#include "fordspine/tessellation.hpp"

namespace fordspine {

// The tessellations of all cusps, built from one admissible set of scales.
struct FordEnsemble {
    std::vector<FordTessellation> cusps;
    CuspScales scales;

    const PolygonCell& cell(int cusp, int index) const {
        return cusps.at(static_cast<std::size_t>(cusp)).cells.at(static_cast<std::size_t>(index));
    }
    std::size_t cell_count() const;
};

FordEnsemble build_ensemble(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits,
                            const CuspScales& scales);

// Pairs every cell with the cell carrying the image of its wall under the
// inverse of its witness. Fills PolygonCell::pairing.
void match_polygons(FordEnsemble& ensemble, const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits);

// Residual of mapping cell a onto cell b by iso; fills corner_map. Returns +inf
// when vertex counts differ or the map does not reverse orientation.
double congruence_residual(const PolygonCell& a, const PolygonCell& b, const PlanarIsometry& iso,
                           std::vector<int>* corner_map = nullptr);

struct PairingCheck {
    double max_radius_gap = 0.0;
    double max_residual = 0.0;
    double max_involution_error = 0.0;
    bool involutive = true;
};

PairingCheck check_pairings(const FordEnsemble& ensemble);

// Ford-ball dihedral angle along side `side` of a cell: the angle, measured
// above the surface, between the cell's hemisphere and its neighbor's.
double ford_dihedral_angle(const FordTessellation& T, int cell, int side, double tau = 0.0);

// Going around every spine edge: compose pairings and chart translations back
// to the starting cell and sum the Ford-ball dihedral angles met on the way.
struct EdgeCycle {
    std::vector<std::pair<int, int>> occurrences;  // (cusp, ford edge)
    double angle_sum = 0.0;
    double holonomy_error = 0.0;  // distance of the composed Mobius map from identity
};

std::vector<EdgeCycle> edge_cycles(const FordEnsemble& ensemble);

// The Mobius extension of a cell's pairing, in rescaled coordinates.
MobiusTransform pairing_mobius(const PolygonCell& cell, const PolygonCell& partner);

struct VertexOccurrence {
    int cusp = 0;
    int vertex = 0;
    bool operator==(const VertexOccurrence&) const = default;
};

// Classes of Ford vertices under the pairings (the Gamma-orbits).
std::vector<std::vector<VertexOccurrence>> ford_vertex_classes(const FordEnsemble& ensemble);

struct CrossSection {
    VertexOccurrence occurrence;
    std::vector<cplx> polygon;  // incident label centers around the vertex, CCW
};

struct IdealDualCell {
    int vertex_class = 0;
    VertexOccurrence chart;    // Ford vertex whose chart holds the parabolic points
    cplx position;             // that vertex, in the chart
    double height = 0.0;
    std::vector<ComplexPoint> parabolic_points;  // infinity first
    std::vector<CrossSection> cross_sections;
};

std::vector<IdealDualCell> dual_cells(const FordEnsemble& ensemble);

} // namespace fordspine
