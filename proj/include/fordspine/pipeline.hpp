#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fordspine/deformation.hpp"
#include "fordspine/rivin.hpp"
#include "fordspine/spine.hpp"

namespace fordspine {

// Uniform enlargement of the cusp heights used when a tangent configuration
// has to be turned into weighted points (weights must stay below 1).
inline constexpr double kStrictHeightFactor = 1.25;

struct Verdict {
    bool scales_admissible = false;
    bool pairings_ok = false;
    bool edge_cycles_ok = false;
    bool euler_zero = false;
    bool degrees_ok = false;
    bool links_large = false;
    bool caps_ok = false;
    bool rivin_ok = false;
    double min_systole = 0.0;
    double max_holonomy_error = 0.0;
    double max_angle_sum_error = 0.0;
    int min_degree = 0;

    bool cat0() const { return degrees_ok && links_large && caps_ok && rivin_ok; }
    bool pass() const { return scales_admissible && pairings_ok && edge_cycles_ok && euler_zero && cat0(); }
};

// Orbits do not depend on the scales, so they are computed once per session.
struct OrbitData {
    double eps = 0.05;
    std::vector<HoroballOrbit> orbits;
    CanonicalFamily family;
};

OrbitData prepare_orbits(const ManifoldPresentation& m, double eps, const EnumerationOptions& options = {});

struct PipelineResult {
    CuspScales scales;
    ScaleReport scale_report;
    bool computed = false;  // false when the scales were rejected
    std::shared_ptr<const FordEnsemble> ensemble;
    PairingCheck pairing;
    std::vector<EdgeCycle> cycles;
    std::optional<SpineComplex> complex;
    std::vector<LinkGraph> links;
    std::vector<LinkCheck> link_checks;
    std::vector<CappedLink> capped;
    std::vector<IdealDualCell> duals;
    std::vector<PolarDualData> polar;
    std::vector<RivinReport> rivin;
    Verdict verdict;
};

// Builds everything downstream of the scales. Inadmissible scales give a
// result with computed == false and the violation report filled in.
PipelineResult run_pipeline(const ManifoldPresentation& m, const OrbitData& orbits, const CuspScales& scales);

// Parses "canonical" or a comma separated list of cusp heights, then divides
// the heights by size_factor (a factor of 2 doubles every cusp).
CuspScales resolve_scales(const std::string& text, const OrbitData& orbits, double size_factor = 1.0);

// The ensemble to extract weighted points from: the given one when all label
// radii are below 1, else the same family member enlarged by kStrictHeightFactor.
std::shared_ptr<const FordEnsemble> extraction_ensemble(const ManifoldPresentation& m, const OrbitData& orbits,
                                                        const PipelineResult& result);

// Combinatorial fingerprint of an ensemble plus its spine.
std::string combinatorial_type(const FordEnsemble& ensemble);

struct SweepSample {
    double ratio = 1.0;  // heights ratio s_0 / s_1 before the common shrink
    CuspScales scales;
    std::string type;
};

// A type seen at two or more consecutive samples fills an open interval of the
// family; an isolated sample sits on a transition wall.
struct SweepSummary {
    std::vector<std::string> generic_types;
    std::vector<std::string> wall_types;
    int transitions = 0;  // changes of generic type along the sweep
};

SweepSummary summarize_sweep(const std::vector<SweepSample>& samples);

// Two-cusp family: heights proportional to (sqrt(rho), 1/sqrt(rho)), scaled to
// the largest admissible size, for n log-spaced rho in [1/range, range].
std::vector<SweepSample> sweep_family(const ManifoldPresentation& m, const OrbitData& orbits, double range,
                                      int n);

// The largest uniform enlargement of the given proportions that stays admissible.
CuspScales maximal_admissible(const OrbitData& orbits, const std::vector<double>& proportions);

} // namespace fordspine
