#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"
#include "olab/spatial_field.hpp"

namespace olab {

enum class TableProperty { aInc, aDec, A0, Comparability, adA1 };
enum class Regime { Compliant, Violating };

inline const std::vector<TableProperty>& table_properties() {
    static const std::vector<TableProperty> all{TableProperty::aInc, TableProperty::aDec, TableProperty::A0,
                                                TableProperty::Comparability, TableProperty::adA1};
    return all;
}

inline std::string property_tag(TableProperty p) {
    switch (p) {
        case TableProperty::aInc: return "aInc";
        case TableProperty::aDec: return "aDec";
        case TableProperty::A0: return "A0";
        case TableProperty::Comparability: return "cmp";
        case TableProperty::adA1: return "adA1";
    }
    return "";
}

inline std::string roman(int family) {
    static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
    if (family < 1 || family > 6) throw ArgumentError("catalog: family must be 1..6");
    return names[family - 1];
}

inline int family_from_roman(const std::string& s) {
    for (int f = 1; f <= 6; ++f)
        if (roman(f) == s) return f;
    throw ParseError("catalog: unknown family '" + s + "'");
}

struct TableRow {
    int family = 1;  // 1..6 for (I)..(VI)
    TableProperty property = TableProperty::aInc;
    std::string hypothesis;
    bool expected = true;  // compliant rows hold, violating rows fail
};

// Sufficient condition printed in each table cell.
inline std::string table_hypothesis(int family, TableProperty p) {
    static const char* cells[6][5] = {
        {"essinf p > 1", "esssup p < inf", "(none)", "p in C^0", "p in C^log"},
        {"phi is (aInc)", "phi is (aDec)", "c1 <= a <= c2", "(none)", "(none)"},
        {"a >= 0, p > 1", "q < inf", "a in L^inf", "a in C^0", "a in C^{0,q/p-1}"},
        {"a >= 0, p > 1", "p < inf", "a in L^inf", "a in C^0", "a in C^log"},
        {"a,b >= 0, p > 1", "q <= r < inf", "a,b in L^inf", "a,b in C^0", "a in C^{0,q/p-1}, b in C^{0,r/p-1}"},
        {"essinf p > 1", "esssup q < inf", "a in L^inf", "a,p,q in C^0",
         "p in C^log, a in C^{0,alpha}, q in C^{0,alpha/q^-}, q/p <= 1+alpha"}};
    return cells[family - 1][static_cast<int>(p)];
}

struct CatalogSettings {
    Domain domain = Domain::unit_ball(2);
    Point focus{0.0, 0.0};
    double inc_exponent = 1.05;  // (aInc)_gamma tested with this gamma
    double dec_exponent = 64.0;  // (aDec)_q tested with this q
    double theta_factor = 4.0;   // theta = factor * sigma in local comparability
    double comparability_bound = 2.0;
};

namespace detail {

inline PhiFunction catalog_compliant(int family, const CatalogSettings& s) {
    const Domain& D = s.domain;
    const Point c = s.focus;
    const int d = D.dim;
    switch (family) {
        case 1: return PhiFunction::variable_exponent(D, fields::sin2(2.0, 1.0, 0)).with_label("t^{2+sin^2(pi x1)}");
        case 2:
            return PhiFunction::perturbed_orlicz(D, fields::affine(1.0, 0.5, 0), 2.0, 1.0)
                .with_label("(1+x1/2) t^2 log(e+t)");
        case 3:
            return PhiFunction::double_phase(D, 2.0, 3.0, fields::holder(c, 0.5, 1.0, d))
                .with_focus({c})
                .with_label("t^2+|x|^{1/2} t^3");
        case 4:
            return PhiFunction::degenerate_double_phase(D, 2.0, fields::affine(0.5, 0.5, 0))
                .with_label("t^2+(1+x1)/2 t^2 log(e+t)");
        case 5:
            return PhiFunction::triple_phase(D, 2.0, 3.0, 4.0, fields::holder(c, 0.5, 1.0, d),
                                             fields::holder(c, 1.0, 1.0, d))
                .with_focus({c})
                .with_label("t^2+|x|^{1/2} t^3+|x| t^4");
        case 6: {
            auto p = SpatialField::function([](const Point& x) { return 2.0 + 0.1 * x[0] * x[0]; }, "2+0.1x1^2");
            auto q = SpatialField::function([](const Point& x) { return 2.8 + 0.1 * x[0] * x[0]; }, "2.8+0.1x1^2");
            return PhiFunction::variable_exponent_double_phase(D, p, q, fields::holder(c, 0.5, 1.0, d))
                .with_focus({c})
                .with_label("t^{p(x)}+|x|^{1/2} t^{q(x)}");
        }
        default: throw ArgumentError("catalog: family must be 1..6");
    }
}

inline std::optional<PhiFunction> catalog_violating(int family, TableProperty prop, const CatalogSettings& s) {
    const Domain& D = s.domain;
    const Point c = s.focus;
    const int d = D.dim;
    auto sing = [&](double power) { return fields::singular(c, power, 1.0, d); };
    auto stepf = [&](double below, double above) { return fields::step(c, 0, below, above); };
    switch (family) {
        case 1:
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::variable_exponent(D, fields::holder(c, 1.0, 1.0, d).shifted(1.0))
                        .with_focus({c})
                        .with_label("t^{1+|x|}");
                case TableProperty::aDec:
                    return PhiFunction::variable_exponent(D, sing(0.5).shifted(2.0))
                        .with_focus({c})
                        .with_label("t^{2+|x|^{-1/2}}");
                case TableProperty::Comparability:
                    return PhiFunction::variable_exponent(D, stepf(2.0, 3.0)).with_focus({c}).with_label("t^{2|3 step}");
                case TableProperty::adA1:
                    return PhiFunction::variable_exponent(D, fields::loglog(c, 2.0, 1.0, d))
                        .with_focus({c})
                        .with_label("t^{2+1/loglog(e^e+1/|x|)}");
                default: return std::nullopt;
            }
        case 2:
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::perturbed_orlicz(D, fields::affine(1.0, 0.5, 0), 1.0, 0.0)
                        .with_label("(1+x1/2) t");
                case TableProperty::aDec: {
                    auto a = fields::affine(1.0, 0.5, 0);
                    return PhiFunction::custom(
                        D, [a](const Point& x, double t) { return a(x) * std::expm1(t); }, false,
                        "(1+x1/2)(e^t-1)");
                }
                case TableProperty::A0:
                    return PhiFunction::perturbed_orlicz(D, fields::holder(c, 1.0, 1.0, d), 2.0, 1.0)
                        .with_focus({c})
                        .with_label("|x| t^2 log(e+t)");
                default: return std::nullopt;
            }
        case 3:
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::double_phase(D, 1.0, 2.0, fields::holder(c, 0.5, 1.0, d))
                        .with_focus({c})
                        .with_label("t+|x|^{1/2} t^2");
                case TableProperty::A0:
                    return PhiFunction::double_phase(D, 2.0, 3.0, sing(0.5)).with_focus({c}).with_label("t^2+|x|^{-1/2} t^3");
                case TableProperty::Comparability:
                    return PhiFunction::double_phase(D, 2.0, 3.0, stepf(0.0, 1.0)).with_focus({c}).with_label("t^2+step t^3");
                case TableProperty::adA1:
                    return PhiFunction::double_phase(D, 2.0, 3.0, fields::holder(c, 0.1, 1.0, d))
                        .with_focus({c})
                        .with_label("t^2+|x|^{0.1} t^3");
                default: return std::nullopt;
            }
        case 4:
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::degenerate_double_phase(D, 1.0, fields::affine(0.5, 0.5, 0))
                        .with_label("t+(1+x1)/2 t log(e+t)");
                case TableProperty::A0:
                    return PhiFunction::degenerate_double_phase(D, 2.0, sing(0.5))
                        .with_focus({c})
                        .with_label("t^2+|x|^{-1/2} t^2 log(e+t)");
                case TableProperty::Comparability:
                    return PhiFunction::degenerate_double_phase(D, 2.0, stepf(0.0, 1.0))
                        .with_focus({c})
                        .with_label("t^2+step t^2 log(e+t)");
                default: return std::nullopt;
            }
        case 5: {
            auto a = fields::holder(c, 0.5, 1.0, d);
            auto b = fields::holder(c, 1.0, 1.0, d);
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::triple_phase(D, 1.0, 3.0, 4.0, a, b).with_focus({c}).with_label("t+a t^3+b t^4");
                case TableProperty::A0:
                    return PhiFunction::triple_phase(D, 2.0, 3.0, 4.0, a, sing(0.5))
                        .with_focus({c})
                        .with_label("t^2+a t^3+|x|^{-1/2} t^4");
                case TableProperty::Comparability:
                    return PhiFunction::triple_phase(D, 2.0, 3.0, 4.0, a, stepf(0.0, 1.0))
                        .with_focus({c})
                        .with_label("t^2+a t^3+step t^4");
                case TableProperty::adA1:
                    return PhiFunction::triple_phase(D, 2.0, 3.0, 4.0, a, fields::holder(c, 0.5, 1.0, d))
                        .with_focus({c})
                        .with_label("t^2+a t^3+|x|^{1/2} t^4");
                default: return std::nullopt;
            }
        }
        case 6: {
            auto p = SpatialField::function([](const Point& x) { return 2.0 + 0.1 * x[0] * x[0]; }, "2+0.1x1^2");
            auto q = SpatialField::function([](const Point& x) { return 2.8 + 0.1 * x[0] * x[0]; }, "2.8+0.1x1^2");
            auto a = fields::holder(c, 0.5, 1.0, d);
            switch (prop) {
                case TableProperty::aInc:
                    return PhiFunction::variable_exponent_double_phase(D, fields::holder(c, 1.0, 1.0, d).shifted(1.0),
                                                                       q, a)
                        .with_focus({c})
                        .with_label("t^{1+|x|}+a t^q");
                case TableProperty::aDec:
                    return PhiFunction::variable_exponent_double_phase(D, p, sing(0.5).shifted(3.0),
                                                                       SpatialField::constant(1.0))
                        .with_focus({c})
                        .with_label("t^p+t^{3+|x|^{-1/2}}");
                case TableProperty::A0:
                    return PhiFunction::variable_exponent_double_phase(D, p, q, sing(0.5))
                        .with_focus({c})
                        .with_label("t^p+|x|^{-1/2} t^q");
                case TableProperty::Comparability:
                    return PhiFunction::variable_exponent_double_phase(D, p, q, stepf(0.0, 1.0))
                        .with_focus({c})
                        .with_label("t^p+step t^q");
                case TableProperty::adA1:
                    return PhiFunction::variable_exponent_double_phase(D, p, q, fields::holder(c, 0.1, 1.0, d))
                        .with_focus({c})
                        .with_label("t^p+|x|^{0.1} t^q");
                default: return std::nullopt;
            }
        }
        default: throw ArgumentError("catalog: family must be 1..6");
    }
}

}  // namespace detail

inline bool has_violating_instance(int family, TableProperty prop, const CatalogSettings& s = {}) {
    return detail::catalog_violating(family, prop, s).has_value();
}

inline PhiFunction build_family(const TableRow& row, Regime regime, const CatalogSettings& s = {}) {
    if (regime == Regime::Compliant) return detail::catalog_compliant(row.family, s);
    auto v = detail::catalog_violating(row.family, row.property, s);
    if (!v)
        throw ArgumentError("catalog: no violating instance for row (" + roman(row.family) + ") property " +
                            property_tag(row.property));
    return *v;
}

// Points where local comparability is checked: focus points, the center and four lattice points.
inline std::vector<Point> comparability_points(const PhiFunction& phi, const CatalogSettings& s) {
    std::vector<Point> pts = phi.focus_points();
    const Domain& D = s.domain;
    pts.push_back(D.center);
    const double r = 0.5 * (D.kind == DomainKind::Ball ? D.radius : 0.5 * D.scale());
    for (Point o : std::vector<Point>{{r, 0.0}, {-r, 0.0}, {0.0, r}, {0.0, -r}}) {
        if (D.dim == 1 && o[1] != 0.0) continue;
        Point x{D.center[0] + o[0], D.center[1] + o[1]};
        if (D.contains(x)) pts.push_back(x);
    }
    return pts;
}

inline PropertyReport run_table_check(const PhiFunction& phi, TableProperty prop, const CatalogSettings& s,
                                      const CheckConfig& cfg) {
    switch (prop) {
        case TableProperty::aInc: return check_inc(phi, s.inc_exponent, true, cfg);
        case TableProperty::aDec: return check_dec(phi, s.dec_exponent, true, cfg);
        case TableProperty::A0: return check_A0(phi, cfg);
        case TableProperty::Comparability: {
            auto a0 = check_A0(phi, cfg);
            if (!a0.holds) {
                PropertyReport r = a0;
                r.property = "cmp";
                r.note = "(A0) fails, so local comparability cannot be evaluated";
                return r;
            }
            const double theta = s.theta_factor * a0.constants.at("sigma");
            PropertyReport worst;
            bool first = true;
            for (const auto& x : comparability_points(phi, s)) {
                auto r = check_local_comparability(phi, x, theta, cfg, s.comparability_bound);
                if (!r.holds) return r;
                if (first || r.constants.at("C") > worst.constants.at("C")) worst = r;
                first = false;
            }
            return worst;
        }
        case TableProperty::adA1: return check_adA1(phi, adA1_test_balls(phi, s.domain), cfg);
    }
    throw ArgumentError("catalog: unknown property");
}

struct TableCheck {
    TableRow row;
    Regime regime = Regime::Compliant;
    std::string instance;
    PropertyReport report;
    bool matches = false;  // report.holds == row.expected
    bool numerical_only = false;
};

// One row per (family, property) compliant instance and one per constructible violating instance.
inline std::vector<TableRow> all_table_rows(const CatalogSettings& s = {}) {
    std::vector<TableRow> rows;
    for (int f = 1; f <= 6; ++f)
        for (auto p : table_properties()) {
            rows.push_back({f, p, table_hypothesis(f, p), true});
            if (has_violating_instance(f, p, s)) rows.push_back({f, p, "violates: " + table_hypothesis(f, p), false});
        }
    return rows;
}

inline std::vector<TableCheck> verify_table(const std::vector<TableRow>& rows, std::uint64_t seed,
                                            const CatalogSettings& s = {}) {
    CheckConfig cfg;
    cfg.seed = seed;
    std::vector<TableCheck> out;
    for (const auto& row : rows) {
        TableCheck tc;
        tc.row = row;
        tc.regime = row.expected ? Regime::Compliant : Regime::Violating;
        PhiFunction phi = build_family(row, tc.regime, s);
        tc.instance = phi.label();
        tc.report = run_table_check(phi, row.property, s, cfg);
        tc.report.property = property_tag(row.property);
        tc.matches = tc.report.holds == row.expected && (row.expected || tc.report.witness.has_value());
        tc.numerical_only = row.family == 6;
        if (tc.numerical_only) tc.report.note += (tc.report.note.empty() ? "" : "; ") + std::string("row VI: checked numerically only");
        out.push_back(std::move(tc));
    }
    return out;
}

// Text rendering: per cell "ok" when the compliant instance passes, "+v" when a
// violating instance exists and fails, "!" on any mismatch.
inline std::string render_table(const std::vector<TableCheck>& checks) {
    std::ostringstream os;
    os << "family | aInc | aDec | A0 | cmp | adA1\n";
    for (int f = 1; f <= 6; ++f) {
        os << roman(f);
        for (auto p : table_properties()) {
            std::string cell;
            bool seen = false;
            for (const auto& c : checks) {
                if (c.row.family != f || c.row.property != p) continue;
                seen = true;
                if (!c.matches) cell += "!";
                else cell += c.regime == Regime::Compliant ? "ok" : "+v";
            }
            os << " | " << (seen ? cell : "-");
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace olab
