#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "fordspine/presentation.hpp"

namespace fordspine {

// One horoball of the cusp-i view. The diameter is the one obtained when
// every cusp's own horoball is bounded by the plane at height 1 in its view.
struct OrbitEntry {
    Horoball ball;
    int source_cusp = 0;
    MobiusTransform witness;  // view of source_cusp -> view i, sends infinity to ball.center
    int word_length = 0;
};

struct EnumerationOptions {
    int word_length_cap = 12;
    int max_refinements = 4;          // prune levels eps/4, eps/16, ...
    std::size_t max_balls = 3'000'000;
    double max_unit_diameter = 1e6;   // a larger ball means |c| collapsed
};

struct HoroballOrbit {
    int viewpoint = 0;
    double min_diameter = 0.0;   // eps
    double prune_diameter = 0.0; // bound at which the >= eps part stabilized
    int refinement_levels = 0;
    std::size_t explored_balls = 0;
    int max_word_length = 0;
    std::vector<OrbitEntry> entries;  // sorted: diameter desc, then center
};

HoroballOrbit enumerate_horoballs(const ManifoldPresentation& m, int cusp, double eps,
                                  const EnumerationOptions& options = {});

std::vector<HoroballOrbit> enumerate_all_horoballs(const ManifoldPresentation& m, double eps,
                                                   const EnumerationOptions& options = {});

// Heights of the cusp tori, one per cusp, each in its own normalized view.
struct CuspScales {
    std::vector<double> heights;

    CuspScales scaled(double factor) const;
};

// D[i][k]: largest unit diameter of a cusp-k ball seen from cusp i
// (NaN when no such ball reaches the cutoff). Symmetric.
std::vector<std::vector<double>> tangency_bounds(const std::vector<HoroballOrbit>& orbits);

double maximal_cusp_scale(const HoroballOrbit& orbit);

struct CanonicalFamily {
    CuspScales scales;
    std::vector<double> maximal;
    double sigma = 1.0;
    std::vector<std::pair<int, int>> active_pairs;  // cusp pairs realizing the tangency
};

CanonicalFamily canonical_family(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits);

struct ScaleConstraint {
    int view = 0;
    int source = 0;
    int entry = 0;
    double required = 0.0;  // s_view * s_source must be at least this
    double product = 0.0;
};

struct ScaleInterval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

struct ScaleReport {
    std::vector<ScaleConstraint> violations;
    std::vector<ScaleConstraint> tangencies;
    std::vector<ScaleInterval> admissible;
    bool is_admissible() const { return violations.empty(); }
};

ScaleReport validate_scales(const ManifoldPresentation& m, const std::vector<HoroballOrbit>& orbits,
                            const CuspScales& scales);

} // namespace fordspine
