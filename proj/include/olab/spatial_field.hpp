#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>

#include "olab/geometry.hpp"

namespace olab {

// Coefficient field x -> value. Either a constant, a closed-form map with a
// known modulus, or an interpolated grid (see field_from_grid in grid.hpp).
class SpatialField {
public:
    using Fn = std::function<double(const Point&)>;

    SpatialField() = default;

    static SpatialField constant(double c) {
        SpatialField f;
        f.constant_ = true;
        f.value_ = c;
        f.description_ = "const(" + format(c) + ")";
        return f;
    }
    static SpatialField function(Fn fn, std::string description) {
        SpatialField f;
        f.constant_ = false;
        f.fn_ = std::move(fn);
        f.description_ = std::move(description);
        return f;
    }

    double operator()(const Point& x) const { return constant_ ? value_ : fn_(x); }
    bool is_constant() const { return constant_; }
    double constant_value() const { return value_; }
    const std::string& description() const { return description_; }

    // x -> c + f(x).
    SpatialField shifted(double c) const {
        if (constant_) return constant(value_ + c);
        Fn inner = fn_;
        return function([inner, c](const Point& x) { return c + inner(x); }, format(c) + "+" + description_);
    }

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    bool constant_ = true;
    double value_ = 0.0;
    Fn fn_;
    std::string description_ = "const(0)";
};

// Closed-form fields with exact moduli of continuity, centered at c.
namespace fields {

inline SpatialField holder(const Point& c, double alpha, double scale, int d) {
    return SpatialField::function(
        [=](const Point& x) { return scale * std::pow(distance(x, c, d), alpha); },
        "holder(alpha=" + format_number(alpha) + ")");
}

// 1 / log(log(e^e + 1/|x-c|)): continuous at c but not log-Hoelder there.
inline SpatialField loglog(const Point& c, double base, double scale, int d) {
    return SpatialField::function(
        [=](const Point& x) {
            double r = distance(x, c, d);
            if (r == 0.0) return base;
            double inner = std::exp(std::numbers::e) + 1.0 / r;
            return base + scale / std::log(std::log(inner));
        },
        "loglog");
}

inline SpatialField step(const Point& c, int axis, double below, double above) {
    return SpatialField::function([=](const Point& x) { return x[axis] >= c[axis] ? above : below; },
                                  "step");
}

// |x-c|^{-power}, with value 0 at the center (a null set).
inline SpatialField singular(const Point& c, double power, double scale, int d) {
    return SpatialField::function(
        [=](const Point& x) {
            double r = distance(x, c, d);
            return r == 0.0 ? 0.0 : scale * std::pow(r, -power);
        },
        "singular(power=" + format_number(power) + ")");
}

inline SpatialField sin2(double base, double amplitude, int axis) {
    return SpatialField::function(
        [=](const Point& x) {
            double s = std::sin(std::numbers::pi * x[axis]);
            return base + amplitude * s * s;
        },
        "sin2");
}

inline SpatialField affine(double base, double slope, int axis) {
    return SpatialField::function([=](const Point& x) { return base + slope * x[axis]; }, "affine");
}

}  // namespace fields

}  // namespace olab
