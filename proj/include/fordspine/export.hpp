#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fordspine/pipeline.hpp"
#include "fordspine/reconstruction.hpp"

namespace fordspine {

using json = nlohmann::json;

namespace schema {
inline constexpr const char* kTessellation = "fordspine/tessellation@1";
inline constexpr const char* kComplex = "fordspine/complex@1";
inline constexpr const char* kVerdict = "fordspine/verdict@1";
inline constexpr const char* kScales = "fordspine/scales@1";
inline constexpr const char* kDual = "fordspine/dual@1";
inline constexpr const char* kWeightedPoints = "fordspine/weighted-points@1";
inline constexpr const char* kDeformation = "fordspine/deformation@1";
inline constexpr const char* kSweep = "fordspine/sweep@1";
} // namespace schema

// All exports are plain functions of their inputs: no clocks, no addresses,
// object keys sorted. Two runs on the same inputs give identical bytes.
std::string dump(const json& j);

json tessellation_json(const FordTessellation& T);
json complex_json(const PipelineResult& r);
json verdict_json(const PipelineResult& r);
json scales_json(const PipelineResult& r);
json dual_json(const PipelineResult& r);
json deformation_json(const ProfileReport& profile, const std::vector<LimitReport>& limits);
json sweep_json(const std::vector<SweepSample>& samples, const SweepSummary& summary);

struct PointSource {
    std::string fixture;
    std::vector<double> heights;
    double eps = 0.05;
};

std::optional<PointSource> parse_point_source(const json& j);

json weighted_points_json(const WeightedPointSet& W, const std::optional<PointSource>& source = std::nullopt);
WeightedPointSet parse_weighted_points(const json& j);

// Re-checks a complex file on its own numbers: degrees and cone angles, link
// systoles, capped links, and Rivin's conditions on the stored polar duals.
struct ComplexFileCheck {
    bool degrees_ok = true;
    bool links_large = true;
    bool caps_ok = true;
    bool rivin_ok = true;
    double min_systole = 0.0;
    int failing_link = -1;     // first vertex link below 2 pi
    std::vector<int> witness;  // its shortest cycle, as link edge ids
    std::vector<std::string> messages;

    bool pass() const { return degrees_ok && links_large && caps_ok && rivin_ok; }
};

ComplexFileCheck check_complex_json(const json& j);
json complex_check_json(const ComplexFileCheck& c);

// One torus of cells drawn in the fundamental parallelogram; cells of one
// partner class share a color. Coordinates carry 12 significant digits.
std::string tessellation_svg(const FordTessellation& T);

json parse_json_text(const std::string& text, const std::string& what);

} // namespace fordspine
