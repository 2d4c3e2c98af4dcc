#pragma once

#include <vector>

#include "fordspine/pairing.hpp"

namespace fordspine {

// Dual graph X* of an ideal polyhedron X: one node per face of X, one edge per
// edge of X weighted by its exterior dihedral angle.
struct DualEdge {
    int u = 0, v = 0;       // faces of X on either side
    double weight = 0.0;    // pi minus the interior dihedral angle
    int ideal_a = -1, ideal_b = -1;  // the ideal endpoints of the edge of X
};

struct PolarDualData {
    int node_count = 0;
    std::vector<DualEdge> edges;
    std::vector<std::vector<int>> face_cycles;  // edge ids around each ideal vertex
    std::vector<std::vector<int>> faces;        // ideal vertices of each face of X
    double endpoint_mismatch = 0.0;             // weight disagreement between the two ends of an edge
};

PolarDualData polar_dual(const IdealDualCell& cell);
PolarDualData polar_dual(const std::vector<ComplexPoint>& ideal_vertices);

struct RivinReport {
    bool condition1 = false;
    bool condition2 = false;
    bool condition3 = false;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double max_face_error = 0.0;
    double min_nonface_sum = 0.0;    // +inf when there are no non-face circuits
    std::vector<int> witness;        // shortest-sum non-face circuit
    std::size_t circuits_checked = 0;

    bool pass() const { return condition1 && condition2 && condition3; }
};

// circuit_cap limits circuit length in edges; 0 means every simple circuit.
RivinReport rivin_check(const PolarDualData& D, std::size_t circuit_cap = 0);

// Simple circuits of a multigraph, as sorted edge-id lists.
std::vector<std::vector<int>> simple_circuits(int node_count, const std::vector<std::pair<int, int>>& edges,
                                              std::size_t cap = 0);

} // namespace fordspine
