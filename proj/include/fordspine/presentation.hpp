#pragma once

#include <string>
#include <vector>

#include "fordspine/halfspace.hpp"
#include "fordspine/lattice.hpp"

namespace fordspine {

struct CuspData {
    MobiusTransform conjugator;  // sends the cusp's parabolic point to infinity
    Lattice lattice;
    std::vector<std::string> peripheral_words;  // words realizing (l1, l2) in this view
};

struct ManifoldPresentation {
    std::string name;
    std::vector<char> generator_names;  // lowercase letters; uppercase means inverse
    std::vector<MobiusTransform> generators;
    std::vector<std::string> relators;
    std::vector<CuspData> cusps;

    int cusp_count() const { return static_cast<int>(cusps.size()); }

    // Generators and their inverses conjugated into the view of cusp i.
    std::vector<MobiusTransform> view_generators(int cusp) const;
};

MobiusTransform evaluate_word(const ManifoldPresentation& m, const std::string& word);

ManifoldPresentation parse_presentation(const std::string& text);
ManifoldPresentation load_presentation(const std::string& path);
std::string read_text_file(const std::string& path);

// Resolves a fixture argument: an existing path, or a name looked up in
// $FORDSPINE_FIXTURES (with or without the .json suffix).
std::string resolve_fixture_path(const std::string& name_or_path);

struct PresentationCheck {
    double relator_residual = 0.0;    // max distance of a relator from +-identity
    double peripheral_residual = 0.0; // max mismatch between words and lattice periods
    bool ok() const { return relator_residual < 1e-9 && peripheral_residual < 1e-9; }
};

PresentationCheck check_presentation(const ManifoldPresentation& m);

} // namespace fordspine
