#pragma once

#include <memory>
#include <vector>

#include "fordspine/pairing.hpp"

namespace fordspine {

struct CellRef {
    int cusp = 0;
    int cell = 0;
    bool operator==(const CellRef&) const = default;
};

struct EdgeOccurrence {
    int cusp = 0;
    int edge = 0;
};

struct SpineVertex {
    std::vector<VertexOccurrence> occurrences;
};

struct SpineEdge {
    std::vector<EdgeOccurrence> occurrences;
    int degree = 0;
    double cone_angle = 0.0;  // degree * pi
    double length = 0.0;
};

struct SpineFace {
    CellRef a, b;
};

// A corner of a cell: the polygon vertex `corner` of cell (cusp, cell).
struct CornerKey {
    int cusp = 0;
    int cell = 0;
    int corner = 0;
};

struct SpineComplex {
    std::shared_ptr<const FordEnsemble> ensemble;
    std::vector<SpineVertex> vertices;
    std::vector<SpineEdge> edges;
    std::vector<SpineFace> faces;
    int euler_characteristic = 0;

    // Indices per (cusp, cell, side, end) and per (cusp, cell, corner).
    std::vector<std::vector<std::vector<int>>> germ_class;    // [cusp][cell][2*side+end]
    std::vector<std::vector<std::vector<int>>> corner_class;  // [cusp][cell][corner]
    int germ_count = 0;
    int corner_class_count = 0;
    std::vector<int> germ_vertex;   // spine vertex of each germ class
    std::vector<int> vertex_of_occurrence_base;  // offset of each cusp in the flattened occurrence index
    std::vector<int> occurrence_vertex;          // spine vertex of each flattened Ford vertex
};

SpineComplex assemble(std::shared_ptr<const FordEnsemble> ensemble);

struct LinkEdge {
    int u = 0, v = 0;
    double length = 0.0;
    std::vector<CornerKey> corners;
};

struct CuspCircle {
    VertexOccurrence occurrence;
    std::vector<int> edges;
    double length = 0.0;
};

struct LinkGraph {
    int vertex = 0;
    int node_count = 0;
    std::vector<LinkEdge> edges;
    std::vector<CuspCircle> circles;
};

LinkGraph vertex_link(const SpineComplex& S, int vertex);

struct LinkCheck {
    double systole = 0.0;
    std::vector<int> witness;  // edge ids of a shortest cycle
    bool pass = false;
};

LinkCheck check_link_large(const LinkGraph& L);

struct CappedLink {
    std::vector<double> cap_lengths;
    int euler_characteristic = 0;
};

CappedLink completed_link(const LinkGraph& L);

} // namespace fordspine
