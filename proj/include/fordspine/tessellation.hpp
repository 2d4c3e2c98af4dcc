#pragma once

#include <optional>
#include <vector>

#include "fordspine/lattice.hpp"
#include "fordspine/orbits.hpp"

namespace fordspine {

// A label in the rescaled chart of one cusp (torus at height 1), with the
// orbit entry it came from when there is one.
struct LabeledSite {
    HemisphereLabel label;
    int source_cusp = -1;
    int orbit_entry = -1;
};

struct CellSide {
    int neighbor = -1;
    LatticeShift shift;  // neighbor cell, translated by shift, shares this side
};

// Orientation-reversing isometry x -> offset + mu * conj(x) into the partner's frame.
struct PlanarIsometry {
    cplx offset{0, 0};
    cplx mu{1, 0};

    cplx operator()(cplx x) const { return offset + mu * std::conj(x); }
    PlanarIsometry inverse() const { return {-mu * std::conj(offset), mu}; }
};

struct CellPairing {
    int cusp = -1;
    int cell = -1;
    PlanarIsometry map;
    std::vector<int> corner_map;  // corner k -> partner corner
    double residual = 0.0;
};

struct PolygonCell {
    int cusp = 0;
    int index = 0;
    HemisphereLabel label{};
    int source_cusp = -1;
    int orbit_entry = -1;
    std::vector<cplx> vertices;   // CCW; the frame where the label center is reduced
    std::vector<CellSide> sides;  // side k joins vertex k to vertex k+1
    std::vector<int> corner_vertex;  // Ford vertex index of each corner
    std::vector<int> side_edge;      // Ford edge index of each side
    std::optional<CellPairing> pairing;

    double area() const { return polygon_area(vertices); }
    double corner_angle(std::size_t k) const;
};

struct FordEdge {
    int cell_a = -1, side_a = -1;
    int cell_b = -1, side_b = -1;
    LatticeShift shift_b;  // cell_b translated by shift_b meets cell_a along this edge
    cplx start, end;       // in cell_a's frame
};

struct CornerRef {
    int cell = -1;
    int corner = -1;
};

struct FordVertex {
    cplx position;  // reduced into the fundamental parallelogram
    std::vector<CornerRef> corners;
    double height = 0.0;
    bool generic = true;
};

struct FordTessellation {
    int cusp = 0;
    Lattice lattice;  // rescaled periods
    double scale = 1.0;
    std::vector<PolygonCell> cells;
    std::vector<FordEdge> edges;
    std::vector<FordVertex> vertices;
    std::vector<LabeledSite> dominated;  // sites whose power cell is empty

    double covered_area() const;
    int euler_characteristic() const {
        return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(cells.size());
    }
    // Max power over all cells (with translates) at x; the lifted Ford surface height is its root.
    double max_power(cplx x) const;
    int owner(cplx x) const;  // cell index maximizing power at x
};

// Every orbit entry as a site in the rescaled chart of the viewing cusp.
std::vector<LabeledSite> candidate_sites(const HoroballOrbit& orbit, const CuspScales& scales);

FordTessellation power_diagram(const std::vector<LabeledSite>& sites, const Lattice& lattice, int cusp = 0);
FordTessellation power_diagram(const std::vector<HemisphereLabel>& labels, const Lattice& lattice, int cusp = 0);

// Sites with nonempty power cell. Throws cutoff-too-coarse if they fail to cover.
std::vector<LabeledSite> visible_labels(const HoroballOrbit& orbit, const CuspScales& scales,
                                        const ManifoldPresentation& m);

// The tessellation of cusp i at the given scales, with the cutoff certified.
FordTessellation build_tessellation(const ManifoldPresentation& m, const HoroballOrbit& orbit,
                                    const CuspScales& scales);

HyperbolicPolygon lift_cell(const PolygonCell& cell);

// Brute-force owner of grid point x over sites and their translates.
int brute_force_owner(const std::vector<HemisphereLabel>& labels, const Lattice& lattice, cplx x);

// Raw per-site clipping result, before any coverage verdict.
struct ClippedCell {
    std::vector<cplx> vertices;
    std::vector<CellSide> sides;  // neighbor -1 marks a side of the bounding box
    bool empty = true;
    bool escapes_disk = false;    // the cell reaches beyond the label disk
};

std::vector<ClippedCell> clip_power_cells(const std::vector<HemisphereLabel>& labels, const Lattice& lattice);

} // namespace fordspine
