#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/expr.hpp"
#include "olab/geometry.hpp"
#include "olab/grid.hpp"
#include "olab/phi.hpp"
#include "olab/spatial_field.hpp"

namespace olab {

// Phi-descriptor text format, one `key = value` per line, `#` starts a comment:
//
//   family = double_phase          # or DoublePhase, power, variable_exponent, ...
//   dim    = 2
//   domain = ball 0,0,1            # or: box -1,-1,1,1
//   p = 2
//   q = 3
//   coef.a = {kind: expr, value: 0.5*(1+x)}
//   coef.b = {kind: grid, path: b.gfn}   # relative to the descriptor file
//   focus  = 0,0; 0.5,0
//
// Variable exponents use coef.p / coef.q instead of the scalars p / q.
struct CoefSpec {
    std::string kind;  // "expr" | "grid" | "const"
    std::string value;
    std::string path;
};

struct PhiDescriptor {
    std::string family;
    int dim = 2;
    Domain domain = Domain::unit_ball(2);
    std::map<std::string, double> scalars;
    std::map<std::string, CoefSpec> coefs;
    std::vector<Point> focus;
    std::string label;
    std::filesystem::path base_dir;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::string normalize_family(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw ParseError("descriptor: key '" + key + "' expects a real, got '" + v + "'");
}

// {kind: expr, value: ...} ; a bare number is a constant.
inline CoefSpec parse_coef(const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    CoefSpec c;
    if (v.empty()) throw ParseError("descriptor: empty value for '" + key + "'");
    if (v.front() != '{') {
        c.kind = "const";
        c.value = std::to_string(parse_real(key, v));
        return c;
    }
    if (v.back() != '}') throw ParseError("descriptor: unterminated '{' in '" + key + "'");
    std::string body = v.substr(1, v.size() - 2);
    // Split on commas outside parentheses so expressions may contain calls.
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : body) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    for (const auto& part : parts) {
        auto colon = part.find(':');
        if (colon == std::string::npos) throw ParseError("descriptor: '" + key + "' entry without ':'");
        std::string k = trim(part.substr(0, colon)), val = trim(part.substr(colon + 1));
        if (k == "kind") c.kind = val;
        else if (k == "value" || k == "expr") c.value = val;
        else if (k == "path" || k == "file") c.path = val;
        else throw ParseError("descriptor: unknown field '" + k + "' in '" + key + "'");
    }
    if (c.kind == "expr") {
        if (c.value.empty()) throw ParseError("descriptor: '" + key + "' expr needs a value");
        compile_expression(c.value);  // validate eagerly
    } else if (c.kind == "grid") {
        if (c.path.empty()) throw ParseError("descriptor: '" + key + "' grid needs a path");
    } else {
        throw ParseError("descriptor: '" + key + "' has unknown kind '" + c.kind + "'");
    }
    return c;
}

inline std::vector<Point> parse_points(const std::string& v) {
    std::vector<Point> pts;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto xs = gfn::parse_list(tok);
        if (xs.empty() || xs.size() > 2) throw ParseError("descriptor: bad focus point '" + tok + "'");
        pts.push_back({xs[0], xs.size() > 1 ? xs[1] : 0.0});
    }
    return pts;
}

}  // namespace detail

inline PhiDescriptor parse_descriptor(std::istream& is, std::filesystem::path base_dir = {}) {
    PhiDescriptor d;
    d.base_dir = std::move(base_dir);
    std::string line, domain_spec;
    int lineno = 0;
    bool dim_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("descriptor line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ParseError("descriptor line " + std::to_string(lineno) + ": empty key or value");
        if (key == "family") d.family = val;
        else if (key == "label") d.label = val;
        else if (key == "dim") {
            double x = detail::parse_real(key, val);
            if (x != 1.0 && x != 2.0) throw ParseError("descriptor: dim must be 1 or 2");
            d.dim = static_cast<int>(x);
            dim_seen = true;
        } else if (key == "domain") domain_spec = val;
        else if (key == "focus") d.focus = detail::parse_points(val);
        else if (key == "p" || key == "q" || key == "r" || key == "alpha") d.scalars[key] = detail::parse_real(key, val);
        else if (key.rfind("coef.", 0) == 0) {
            std::string name = key.substr(5);
            if (name != "a" && name != "b" && name != "p" && name != "q")
                throw ParseError("descriptor: unknown coefficient '" + key + "'");
            d.coefs[name] = detail::parse_coef(key, val);
        } else {
            throw ParseError("descriptor line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (d.family.empty()) throw ParseError("descriptor: missing 'family'");
    if (!domain_spec.empty()) {
        auto sp = domain_spec.find_first_of(" \t");
        if (sp == std::string::npos) throw ParseError("descriptor: domain needs '<box|ball> <numbers>'");
        d.domain = gfn::parse_domain(d.dim, domain_spec.substr(0, sp), detail::trim(domain_spec.substr(sp + 1)));
    } else if (dim_seen) {
        d.domain = Domain::unit_ball(d.dim);
    }
    return d;
}

inline PhiDescriptor parse_descriptor_string(const std::string& text) {
    std::istringstream is(text);
    return parse_descriptor(is);
}

inline PhiDescriptor load_descriptor(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open descriptor '" + path + "'");
    return parse_descriptor(f, std::filesystem::path(path).parent_path());
}

inline SpatialField build_coef(const PhiDescriptor& d, const std::string& name, std::optional<double> fallback = {}) {
    auto it = d.coefs.find(name);
    if (it == d.coefs.end()) {
        if (auto s = d.scalars.find(name); s != d.scalars.end()) return SpatialField::constant(s->second);
        if (fallback) return SpatialField::constant(*fallback);
        throw ParseError("descriptor: family '" + d.family + "' needs coef." + name);
    }
    const CoefSpec& c = it->second;
    if (c.kind == "const") return SpatialField::constant(std::stod(c.value));
    if (c.kind == "expr") return SpatialField::function(compile_expression(c.value), c.value);
    auto path = std::filesystem::path(c.path);
    if (path.is_relative() && !d.base_dir.empty()) path = d.base_dir / path;
    auto g = load_gfn(path.string());
    if (g.dim() != d.dim) throw ParseError("descriptor: grid '" + c.path + "' has the wrong dimension");
    return field_from_grid(g);
}

inline PhiFunction build_phi(const PhiDescriptor& d) {
    auto scalar = [&](const std::string& k) {
        auto it = d.scalars.find(k);
        if (it == d.scalars.end()) throw ParseError("descriptor: family '" + d.family + "' needs scalar " + k);
        return it->second;
    };
    auto opt = [&](const std::string& k, double dflt) {
        auto it = d.scalars.find(k);
        return it == d.scalars.end() ? dflt : it->second;
    };
    const Domain& D = d.domain;
    std::string fam = detail::normalize_family(d.family);
    std::optional<PhiFunction> phi;
    try {
        if (fam == "power") phi = PhiFunction::power(D, scalar("p"));
        else if (fam == "variableexponent") phi = PhiFunction::variable_exponent(D, build_coef(d, "p"));
        else if (fam == "perturbedorlicz")
            phi = PhiFunction::perturbed_orlicz(D, build_coef(d, "a", 1.0), scalar("p"), opt("alpha", 0.0));
        else if (fam == "doublephase") phi = PhiFunction::double_phase(D, scalar("p"), scalar("q"), build_coef(d, "a"));
        else if (fam == "degeneratedoublephase")
            phi = PhiFunction::degenerate_double_phase(D, scalar("p"), build_coef(d, "a"));
        else if (fam == "triplephase")
            phi = PhiFunction::triple_phase(D, scalar("p"), scalar("q"), scalar("r"), build_coef(d, "a"),
                                            build_coef(d, "b"));
        else if (fam == "variableexponentdoublephase")
            phi = PhiFunction::variable_exponent_double_phase(D, build_coef(d, "p"), build_coef(d, "q"),
                                                              build_coef(d, "a"));
        else throw ParseError("descriptor: unknown family '" + d.family + "'");
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("descriptor: ") + e.what());
    }
    PhiFunction out = *phi;
    if (!d.focus.empty()) out = out.with_focus(d.focus);
    if (!d.label.empty()) out = out.with_label(d.label);
    return out;
}

inline PhiFunction load_phi(const std::string& path) { return build_phi(load_descriptor(path)); }

}  // namespace olab
