#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "olab/error.hpp"

namespace olab {

// Constants frozen from the pilot run of olab_calibrate (seed 1, n = 50,
// mesh 64) times the 1.25 safety margin.
namespace frozen {

inline constexpr double kPoincareInverseT2 = 0.88989;      // pilot 0.7119124
inline constexpr double kPoincareHomogeneousT2 = 0.25804;  // pilot 0.2064296
inline constexpr double kPoincareInverseT1 = 0.84571;      // pilot 0.6765651
inline constexpr double kPoincareHomogeneousT1 = 0.57218;  // pilot 0.4577403
inline constexpr double kGeneralizedP1 = 0.35548;          // pilot 0.2843872, double phase t^2 + |x|^{1/2} t^3
inline constexpr double kGeneralizedP2 = 0.24981;          // pilot 0.1998504
inline constexpr double kMaximalC1 = 1.3520;               // pilot 1.0816015, L^2 on B_1
inline constexpr double kHardyC1 = 1.14995;                // pilot 0.9199567, t^2 in d = 2
// The convex jump-free pilot gives exactly 0; the floor absorbs roundoff.
inline constexpr double kLscCtol = 1e-6;

}  // namespace frozen

// Named tolerances and constants, overridable from a JSON --config file.
struct Tolerances {
    std::map<std::string, double> values{
        {"poincare_inverse", frozen::kPoincareInverseT2},
        {"poincare_homogeneous", frozen::kPoincareHomogeneousT2},
        {"generalized_p1", frozen::kGeneralizedP1},
        {"generalized_p2", frozen::kGeneralizedP2},
        {"maximal_c1", frozen::kMaximalC1},
        {"hardy_c1", frozen::kHardyC1},
        {"lsc_ctol", frozen::kLscCtol},
        {"t_min", 1e-4},
        {"t_max", 1e4},
        {"t_samples", 512},
    };

    double get(const std::string& k) const {
        auto it = values.find(k);
        if (it == values.end()) throw ArgumentError("unknown tolerance '" + k + "'");
        return it->second;
    }
};

inline Tolerances load_tolerances(const std::string& path) {
    Tolerances t;
    if (path.empty()) return t;
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config: top level must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!t.values.count(k)) throw ParseError("config: unknown key '" + k + "'");
        if (!v.is_number()) throw ParseError("config: '" + k + "' must be a number");
        t.values[k] = v.get<double>();
    }
    return t;
}

}  // namespace olab
