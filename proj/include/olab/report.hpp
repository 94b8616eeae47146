#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "olab/error.hpp"
#include "olab/phi_checks.hpp"
#include "olab/poincare.hpp"

namespace olab {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "olab-report";
inline constexpr int kReportVersion = 1;

// Non-finite reals are encoded as strings so that parse(emit(x)) == x.
inline json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "nan") return std::nan("");
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
    }
    throw ParseError("report: expected a number");
}

// Descriptive anchor naming the property a report line refers to.
inline std::string property_anchor(const std::string& property) {
    static const std::pair<const char*, const char*> table[] = {
        {"Inc", "phi/monotone-ratio-increasing"},
        {"aInc", "phi/almost-increasing"},
        {"Dec", "phi/monotone-ratio-decreasing"},
        {"aDec", "phi/almost-decreasing"},
        {"doubling", "phi/doubling"},
        {"A0", "phi/unit-normalization-A0"},
        {"A1", "phi/local-continuity-A1"},
        {"adA1", "phi/adimensional-local-continuity"},
        {"cmp", "phi/local-comparability"},
        {"equivalence", "phi/equivalence"},
        {"prefunction", "phi/prefunction"},
        {"unit_ball", "orlicz/unit-ball"},
        {"maximal_bound", "orlicz/maximal-modular-bound"},
        {"growth", "functional/growth-sandwich"},
        {"lsc", "functional/lower-semicontinuity"},
        {"relaxation", "functional/relaxation-cell-formula"},
        {"inv", "poincare/inverse-form"},
        {"hom", "poincare/homogeneous-form"},
        {"P1", "poincare/generalized-P1"},
        {"P2", "poincare/generalized-P2"},
        {"hardy", "poincare/hardy"},
        {"truncation", "sbv/truncated-difference-bound"},
    };
    for (const auto& [k, v] : table)
        if (property == k) return v;
    return "misc/" + property;
}

inline json to_json(const Witness& w) {
    json j;
    j["x"] = {w.x[0], w.x[1]};
    j["t"] = json_number(w.t);
    if (w.ball) j["ball"] = {{"center", {w.ball->center[0], w.ball->center[1]}}, {"radius", w.ball->radius}, {"dim", w.ball->dim}};
    j["value"] = json_number(w.value);
    j["detail"] = w.detail;
    return j;
}

inline Witness witness_from_json(const json& j) {
    Witness w;
    w.x = {j.at("x").at(0).get<double>(), j.at("x").at(1).get<double>()};
    w.t = number_from_json(j.at("t"));
    if (j.contains("ball")) {
        const auto& b = j["ball"];
        w.ball = Ball{{b.at("center").at(0).get<double>(), b.at("center").at(1).get<double>()},
                      b.at("radius").get<double>(), b.at("dim").get<int>()};
    }
    w.value = number_from_json(j.at("value"));
    w.detail = j.at("detail").get<std::string>();
    return w;
}

inline json to_json(const PropertyReport& r) {
    json j;
    j["kind"] = "property";
    j["property"] = r.property;
    j["anchor"] = property_anchor(r.property);
    j["holds"] = r.holds;
    json c = json::object();
    for (const auto& [k, v] : r.constants) c[k] = json_number(v);
    j["constants"] = c;
    j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    j["sampling"] = {{"seed", r.sampling.seed},
                     {"x_samples", r.sampling.x_samples},
                     {"t_samples", r.sampling.t_samples},
                     {"t_min", r.sampling.t_min},
                     {"t_max", r.sampling.t_max}};
    j["note"] = r.note;
    return j;
}

inline PropertyReport property_report_from_json(const json& j) {
    PropertyReport r;
    r.property = j.at("property").get<std::string>();
    r.holds = j.at("holds").get<bool>();
    for (const auto& [k, v] : j.at("constants").items()) r.constants[k] = number_from_json(v);
    if (!j.at("witness").is_null()) r.witness = witness_from_json(j["witness"]);
    const auto& s = j.at("sampling");
    r.sampling.seed = s.at("seed").get<std::uint64_t>();
    r.sampling.x_samples = s.at("x_samples").get<int>();
    r.sampling.t_samples = s.at("t_samples").get<int>();
    r.sampling.t_min = s.at("t_min").get<double>();
    r.sampling.t_max = s.at("t_max").get<double>();
    r.note = j.at("note").get<std::string>();
    return r;
}

inline json to_json(const InequalityReport& r) {
    return {{"kind", "inequality"},     {"form", r.form},
            {"anchor", property_anchor(r.form)},
            {"case", r.case_id},        {"lhs", json_number(r.lhs)},
            {"rhs", json_number(r.rhs)}, {"constant", json_number(r.constant_used)},
            {"holds", r.holds},         {"mesh", r.mesh},
            {"slack", json_number(r.slack)}};
}

inline InequalityReport inequality_report_from_json(const json& j) {
    InequalityReport r;
    r.form = j.at("form").get<std::string>();
    r.case_id = j.at("case").get<std::string>();
    r.lhs = number_from_json(j.at("lhs"));
    r.rhs = number_from_json(j.at("rhs"));
    r.constant_used = number_from_json(j.at("constant"));
    r.holds = j.at("holds").get<bool>();
    r.mesh = j.at("mesh").get<int>();
    r.slack = number_from_json(j.at("slack"));
    return r;
}

// A versioned header object followed by one object per case.
struct Report {
    json header = json::object();
    std::vector<json> cases;

    static Report make(const std::string& command, std::uint64_t seed, int mesh) {
        Report r;
        r.header = {{"schema", kReportSchema}, {"version", kReportVersion}, {"command", command},
                    {"seed", seed},            {"mesh", mesh}};
        return r;
    }
    void add(json c) { cases.push_back(std::move(c)); }
    bool all_hold() const {
        for (const auto& c : cases)
            if (c.contains("holds") && !c["holds"].get<bool>()) return false;
        return true;
    }
    bool operator==(const Report&) const = default;
};

inline std::string emit_report(const Report& r) {
    std::string out = r.header.dump() + '\n';
    for (const auto& c : r.cases) out += c.dump() + '\n';
    return out;
}

inline Report parse_report(const std::string& text) {
    Report r;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("report: ") + e.what());
        }
        if (first) {
            if (!j.is_object() || j.value("schema", "") != kReportSchema)
                throw ParseError("report: missing header object");
            if (j.value("version", 0) != kReportVersion) throw ParseError("report: unsupported schema version");
            r.header = std::move(j);
            first = false;
        } else {
            r.cases.push_back(std::move(j));
        }
    }
    if (first) throw ParseError("report: empty input");
    return r;
}

// Writes to a sibling temporary file and renames it over the target.
inline void write_report_atomic(const std::string& path, const Report& r) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
        f << emit_report(r);
        f.flush();
        if (!f) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename report into '" + path + "'");
    }
}

inline Report read_report(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open report '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_report(ss.str());
}

}  // namespace olab
