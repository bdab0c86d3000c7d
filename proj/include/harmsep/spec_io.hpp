// spec_io.hpp: Hamiltonian spec files and locale-independent number formatting
//
// A spec file is a JSON object with exactly one of
//   {"ring":      {"n": 8, "omega": 1.0, "delta": 0.5, "mass": 1.0}}
//   {"potential": {"mass": 1.0, "v": [[2, -1], [-1, 2]]}}
//   {"spectrum":  {"frequencies": [1.0, 2.0]}}
// "mass" is optional (default 1).

#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/hamiltonians.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace harmsep {

using ordered_json = nlohmann::ordered_json;

// 12 significant digits, shortest form, independent of the C locale.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

// JSON value carrying the same 12-digit rounding; non-finite values become strings.
inline ordered_json json_number(double x) {
    if (!std::isfinite(x)) return format_number(x);
    const std::string s = format_number(x);
    double y = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    return y;
}

class HamiltonianSpec {
public:
    using Model = std::variant<RingParams, PotentialMatrix, FrequencySpectrum>;

    HamiltonianSpec(Model model, ordered_json echo) : model_(std::move(model)), echo_(std::move(echo)) {}

    const Model& model() const noexcept { return model_; }
    // Canonical re-serialisation of the parsed input.
    const ordered_json& echo() const noexcept { return echo_; }

    const char* kind() const noexcept {
        switch (model_.index()) {
            case 0: return "ring";
            case 1: return "potential";
            default: return "spectrum";
        }
    }

    // Site-basis potential, when the spec defines one.
    std::optional<PotentialMatrix> potential() const {
        if (const auto* r = std::get_if<RingParams>(&model_)) return ring_potential(*r);
        if (const auto* p = std::get_if<PotentialMatrix>(&model_)) return *p;
        return std::nullopt;
    }

    double mass() const {
        if (const auto* r = std::get_if<RingParams>(&model_)) return r->mass;
        if (const auto* p = std::get_if<PotentialMatrix>(&model_)) return p->mass();
        return 1.0;
    }

    // Rings use the closed-form dispersion; potentials are diagonalised.
    FrequencySpectrum spectrum() const {
        if (const auto* r = std::get_if<RingParams>(&model_)) return ring_dispersion(*r);
        if (const auto* p = std::get_if<PotentialMatrix>(&model_)) return spectrum_from_potential(*p);
        return std::get<FrequencySpectrum>(model_);
    }

    // Cyclic-shift certificate of a transitive site symmetry; spectrum-only specs have none.
    bool shift_invariant() const {
        if (std::holds_alternative<RingParams>(model_)) return true;
        if (const auto* p = std::get_if<PotentialMatrix>(&model_)) return is_shift_invariant(*p);
        return false;
    }

private:
    Model model_;
    ordered_json echo_;
};

namespace detail {

inline double require_number(const ordered_json& obj, const char* key, const char* where) {
    if (!obj.contains(key)) throw SpecError(std::string(where) + ": missing key \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw SpecError(std::string(where) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

inline double optional_number(const ordered_json& obj, const char* key, const char* where, double fallback) {
    return obj.contains(key) ? require_number(obj, key, where) : fallback;
}

}  // namespace detail

inline HamiltonianSpec parse_spec(const ordered_json& j) {
    if (!j.is_object()) throw SpecError("spec: top level must be a JSON object");
    int kinds = 0;
    for (const char* k : {"ring", "potential", "spectrum"}) kinds += j.contains(k) ? 1 : 0;
    if (kinds != 1 || j.size() != 1) {
        throw SpecError("spec: expected exactly one of \"ring\", \"potential\", \"spectrum\"");
    }

    if (j.contains("ring")) {
        const auto& r = j.at("ring");
        if (!r.is_object()) throw SpecError("ring: must be an object");
        const double n = detail::require_number(r, "n", "ring");
        if (!r.at("n").is_number_integer() || n < 1) throw SpecError("ring: \"n\" must be an integer >= 1");
        RingParams p;
        p.n = static_cast<int>(n);
        p.omega = detail::require_number(r, "omega", "ring");
        p.delta = detail::require_number(r, "delta", "ring");
        p.mass = detail::optional_number(r, "mass", "ring", 1.0);
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw SpecError(e.what());
        }
        ordered_json echo;
        echo["ring"] = {{"n", p.n}, {"omega", p.omega}, {"delta", p.delta}, {"mass", p.mass}};
        return HamiltonianSpec(p, std::move(echo));
    }

    if (j.contains("potential")) {
        const auto& pj = j.at("potential");
        if (!pj.is_object()) throw SpecError("potential: must be an object");
        const double mass = detail::optional_number(pj, "mass", "potential", 1.0);
        if (!(mass > 0.0)) throw SpecError("potential: \"mass\" must be > 0");
        if (!pj.contains("v") || !pj.at("v").is_array() || pj.at("v").empty()) {
            throw SpecError("potential: \"v\" must be a non-empty array of rows");
        }
        const auto& rows = pj.at("v");
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix v(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = rows.at(static_cast<std::size_t>(i));
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw SpecError("potential: \"v\" must be square");
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const auto& e = row.at(static_cast<std::size_t>(k));
                if (!e.is_number()) throw SpecError("potential: \"v\" entries must be numbers");
                v(i, k) = e.get<double>();
            }
        }
        PotentialMatrix pm(std::move(v), mass);  // InvalidHamiltonian on asymmetric / non-PSD V
        ordered_json echo;
        echo["potential"] = {{"mass", mass}, {"v", rows}};
        return HamiltonianSpec(std::move(pm), std::move(echo));
    }

    const auto& sj = j.at("spectrum");
    if (!sj.is_object() || !sj.contains("frequencies") || !sj.at("frequencies").is_array()) {
        throw SpecError("spectrum: \"frequencies\" must be an array");
    }
    std::vector<double> w;
    for (const auto& e : sj.at("frequencies")) {
        if (!e.is_number()) throw SpecError("spectrum: frequencies must be numbers");
        w.push_back(e.get<double>());
    }
    try {
        FrequencySpectrum spec(std::move(w));
        ordered_json echo;
        echo["spectrum"] = {{"frequencies", spec.frequencies()}};
        return HamiltonianSpec(std::move(spec), std::move(echo));
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

inline HamiltonianSpec parse_spec_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("spec: invalid JSON: ") + e.what());
    }
    return parse_spec(j);
}

inline HamiltonianSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("spec: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec_text(ss.str());
}

}  // namespace harmsep
