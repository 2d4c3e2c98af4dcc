#include "fordspine/presentation.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fordspine {

using nlohmann::json;

std::vector<MobiusTransform> ManifoldPresentation::view_generators(int cusp) const {
    const MobiusTransform& C = cusps.at(cusp).conjugator;
    MobiusTransform Ci = C.inverse();
    std::vector<MobiusTransform> out;
    for (const auto& g : generators) {
        out.push_back(C * g * Ci);
        out.push_back(C * g.inverse() * Ci);
    }
    return out;
}

MobiusTransform evaluate_word(const ManifoldPresentation& m, const std::string& word) {
    MobiusTransform acc;
    for (char ch : word) {
        char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        std::size_t idx = 0;
        while (idx < m.generator_names.size() && m.generator_names[idx] != lower) ++idx;
        if (idx == m.generator_names.size())
            fail(ErrorKind::Parse, std::string("unknown generator letter '") + ch + "'");
        acc = acc * (std::isupper(static_cast<unsigned char>(ch)) ? m.generators[idx].inverse()
                                                                   : m.generators[idx]);
    }
    return acc;
}

namespace {

MobiusTransform matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 8) fail(ErrorKind::Parse, "matrix must be 8 reals");
    std::vector<double> v = j.get<std::vector<double>>();
    return MobiusTransform::normalized({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]});
}

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) fail(ErrorKind::Parse, "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

ManifoldPresentation parse_presentation(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, e.what());
    }
    try {
        ManifoldPresentation m;
        m.name = j.at("name").get<std::string>();
        for (const auto& g : j.at("generators")) {
            std::string name = g.at("name").get<std::string>();
            if (name.size() != 1 || !std::islower(static_cast<unsigned char>(name[0])))
                fail(ErrorKind::Parse, "generator names must be single lowercase letters");
            m.generator_names.push_back(name[0]);
            m.generators.push_back(matrix_from_json(g.at("matrix")));
        }
        if (j.contains("relators")) m.relators = j.at("relators").get<std::vector<std::string>>();
        for (const auto& c : j.at("cusps")) {
            CuspData cd;
            cd.conjugator = matrix_from_json(c.at("conjugator"));
            const auto& L = c.at("lattice");
            if (!L.is_array() || L.size() != 2) fail(ErrorKind::Parse, "lattice needs two periods");
            cd.lattice = Lattice(complex_from_json(L[0]), complex_from_json(L[1]));
            if (c.contains("peripheral_words"))
                cd.peripheral_words = c.at("peripheral_words").get<std::vector<std::string>>();
            m.cusps.push_back(std::move(cd));
        }
        if (m.cusps.empty()) fail(ErrorKind::Parse, "presentation needs at least one cusp");
        return m;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_fixture_path(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path)) return name_or_path;
    if (const char* dir = std::getenv("FORDSPINE_FIXTURES")) {
        for (const std::string& cand : {name_or_path, name_or_path + ".json"}) {
            fs::path p = fs::path(dir) / cand;
            if (fs::exists(p)) return p.string();
        }
    }
    fail(ErrorKind::InvalidArgument, "fixture not found: " + name_or_path);
}

ManifoldPresentation load_presentation(const std::string& path) {
    return parse_presentation(read_text_file(resolve_fixture_path(path)));
}

PresentationCheck check_presentation(const ManifoldPresentation& m) {
    PresentationCheck out;
    const MobiusTransform id;
    for (const auto& r : m.relators)
        out.relator_residual = std::max(out.relator_residual, evaluate_word(m, r).distance_to(id));
    for (const auto& cusp : m.cusps) {
        if (cusp.peripheral_words.empty()) continue;
        if (cusp.peripheral_words.size() != 2)
            fail(ErrorKind::Parse, "a cusp lists either zero or two peripheral words");
        const MobiusTransform& C = cusp.conjugator;
        cplx periods[2] = {cusp.lattice.l1(), cusp.lattice.l2()};
        for (int k = 0; k < 2; ++k) {
            MobiusTransform t = C * evaluate_word(m, cusp.peripheral_words[k]) * C.inverse();
            // normalized translations are [[1, t], [0, 1]]
            double err = std::max({std::abs(t.a() - 1.0), std::abs(t.c()), std::abs(t.d() - 1.0),
                                   std::abs(t.b() - periods[k])});
            out.peripheral_residual = std::max(out.peripheral_residual, err);
        }
    }
    return out;
}

} // namespace fordspine
