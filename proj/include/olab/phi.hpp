#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/spatial_field.hpp"

namespace olab {

enum class Family {
    VariableExponent,
    PerturbedOrlicz,
    DoublePhase,
    DegenerateDoublePhase,
    TriplePhase,
    VariableExponentDoublePhase,
    Custom
};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::VariableExponent: return "VariableExponent";
        case Family::PerturbedOrlicz: return "PerturbedOrlicz";
        case Family::DoublePhase: return "DoublePhase";
        case Family::DegenerateDoublePhase: return "DegenerateDoublePhase";
        case Family::TriplePhase: return "TriplePhase";
        case Family::VariableExponentDoublePhase: return "VariableExponentDoublePhase";
        case Family::Custom: return "Custom";
    }
    return "Custom";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::VariableExponent, Family::PerturbedOrlicz, Family::DoublePhase,
                     Family::DegenerateDoublePhase, Family::TriplePhase, Family::VariableExponentDoublePhase,
                     Family::Custom})
        if (family_name(f) == s) return f;
    throw ParseError("unknown family '" + s + "'");
}

namespace detail {

// c * t^e without spurious overflow of the power alone.
inline double power_term(double c, double t, double e) {
    if (c == 0.0 || t == 0.0) return 0.0;
    double pw = std::pow(t, e);
    double v = c * pw;
    if (std::isinf(pw) || pw == 0.0) v = std::exp(std::log(c) + e * std::log(t));
    return v;
}

}  // namespace detail

// Generalized Phi-function phi(x,t) given by a family tag and coefficient fields.
class PhiFunction {
public:
    using CustomFn = std::function<double(const Point&, double)>;

    static PhiFunction variable_exponent(const Domain& D, SpatialField p) {
        PhiFunction f(Family::VariableExponent, D);
        f.pfield_ = std::move(p);
        return f;
    }
    // a(x) * t^p * log(e+t)^alpha
    static PhiFunction perturbed_orlicz(const Domain& D, SpatialField a, double p, double alpha = 0.0) {
        if (!(p > 0)) throw ArgumentError("perturbed Orlicz: p must be positive");
        if (alpha < 0) throw ArgumentError("perturbed Orlicz: alpha must be nonnegative");
        PhiFunction f(Family::PerturbedOrlicz, D);
        f.a_ = std::move(a);
        f.p_ = p;
        f.alpha_ = alpha;
        return f;
    }
    static PhiFunction double_phase(const Domain& D, double p, double q, SpatialField a) {
        if (!(p > 0) || q < p) throw ArgumentError("double phase: need 0 < p <= q");
        PhiFunction f(Family::DoublePhase, D);
        f.p_ = p;
        f.q_ = q;
        f.a_ = std::move(a);
        return f;
    }
    static PhiFunction degenerate_double_phase(const Domain& D, double p, SpatialField a) {
        if (!(p > 0)) throw ArgumentError("degenerate double phase: p must be positive");
        PhiFunction f(Family::DegenerateDoublePhase, D);
        f.p_ = p;
        f.a_ = std::move(a);
        return f;
    }
    static PhiFunction triple_phase(const Domain& D, double p, double q, double r, SpatialField a, SpatialField b) {
        if (!(p > 0) || q < p || r < q) throw ArgumentError("triple phase: need 0 < p <= q <= r");
        PhiFunction f(Family::TriplePhase, D);
        f.p_ = p;
        f.q_ = q;
        f.r_ = r;
        f.a_ = std::move(a);
        f.b_ = std::move(b);
        return f;
    }
    static PhiFunction variable_exponent_double_phase(const Domain& D, SpatialField p, SpatialField q,
                                                      SpatialField a) {
        PhiFunction f(Family::VariableExponentDoublePhase, D);
        f.pfield_ = std::move(p);
        f.qfield_ = std::move(q);
        f.a_ = std::move(a);
        return f;
    }
    static PhiFunction custom(const Domain& D, CustomFn fn, bool x_independent, std::string label = "custom") {
        PhiFunction f(Family::Custom, D);
        f.custom_ = std::move(fn);
        f.custom_x_independent_ = x_independent;
        f.label_ = std::move(label);
        return f;
    }
    // t^p, independent of x.
    static PhiFunction power(const Domain& D, double p) {
        return double_phase(D, p, p, SpatialField::constant(0.0)).with_label("t^" + short_num(p));
    }

    double operator()(const Point& x, double t) const {
        switch (family_) {
            case Family::VariableExponent: return detail::power_term(1.0, t, pfield_(x));
            case Family::PerturbedOrlicz: {
                double v = detail::power_term(a_(x), t, p_);
                if (alpha_ != 0.0 && v != 0.0) v *= std::pow(std::log(std::numbers::e + t), alpha_);
                return v;
            }
            case Family::DoublePhase: return detail::power_term(1.0, t, p_) + detail::power_term(a_(x), t, q_);
            case Family::DegenerateDoublePhase: {
                double tp = detail::power_term(1.0, t, p_);
                return tp + a_(x) * tp * std::log(std::numbers::e + t);
            }
            case Family::TriplePhase:
                return detail::power_term(1.0, t, p_) + detail::power_term(a_(x), t, q_) +
                       detail::power_term(b_(x), t, r_);
            case Family::VariableExponentDoublePhase:
                return detail::power_term(1.0, t, pfield_(x)) + detail::power_term(a_(x), t, qfield_(x));
            case Family::Custom: return t == 0.0 ? 0.0 : custom_(x, t);
        }
        return 0.0;
    }

    Family family() const { return family_; }
    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim; }
    double p() const { return p_; }
    double q() const { return q_; }
    double r() const { return r_; }
    double alpha() const { return alpha_; }
    const SpatialField& a() const { return a_; }
    const SpatialField& b() const { return b_; }
    const SpatialField& p_field() const { return pfield_; }
    const SpatialField& q_field() const { return qfield_; }
    const std::string& label() const { return label_; }

    bool is_x_independent() const {
        switch (family_) {
            case Family::VariableExponent: return pfield_.is_constant();
            case Family::PerturbedOrlicz:
            case Family::DoublePhase:
            case Family::DegenerateDoublePhase: return a_.is_constant();
            case Family::TriplePhase: return a_.is_constant() && b_.is_constant();
            case Family::VariableExponentDoublePhase:
                return pfield_.is_constant() && qfield_.is_constant() && a_.is_constant();
            case Family::Custom: return custom_x_independent_;
        }
        return false;
    }

    // Points where a coefficient field is singular or discontinuous; samplers
    // refine around them.
    const std::vector<Point>& focus_points() const { return focus_; }
    PhiFunction with_focus(std::vector<Point> pts) const {
        PhiFunction f = *this;
        f.focus_ = std::move(pts);
        return f;
    }
    PhiFunction with_label(std::string label) const {
        PhiFunction f = *this;
        f.label_ = std::move(label);
        return f;
    }
    PhiFunction with_domain(const Domain& D) const {
        PhiFunction f = *this;
        f.domain_ = D;
        return f;
    }

    // A representative point for x-independent evaluation.
    Point anchor() const { return domain_.center; }

private:
    PhiFunction(Family fam, const Domain& D) : family_(fam), domain_(D), label_(family_name(fam)) {}

    static std::string short_num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    Family family_;
    Domain domain_;
    double p_ = 1.0, q_ = 1.0, r_ = 1.0, alpha_ = 0.0;
    SpatialField a_ = SpatialField::constant(0.0);
    SpatialField b_ = SpatialField::constant(0.0);
    SpatialField pfield_ = SpatialField::constant(1.0);
    SpatialField qfield_ = SpatialField::constant(1.0);
    CustomFn custom_;
    bool custom_x_independent_ = false;
    std::vector<Point> focus_;
    std::string label_;
};

// Checked evaluation.
inline double evaluate(const PhiFunction& phi, const Point& x, double t) {
    if (!(t >= 0.0)) throw ArgumentError("evaluate: t must be nonnegative");
    if (!phi.domain().contains(x)) throw DomainError("evaluate: point outside the domain");
    return phi(x, t);
}

inline constexpr double kTolInv = 1e-10;

// inf{t >= 0 : F(t) >= s} for a nondecreasing F, by bisection.
template <class F>
double left_inverse_fn(const F& fn, double s, double tol = kTolInv) {
    if (!(s > 0.0)) return 0.0;
    double hi = 1.0;
    while (fn(hi) < s) {
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    double lo = hi / 2.0;
    while (fn(lo) >= s) {
        hi = lo;
        lo /= 2.0;
        if (lo < 1e-300) return 0.0;
    }
    for (int it = 0; it < 2000 && hi - lo > tol * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (fn(mid) >= s) hi = mid;
        else lo = mid;
    }
    return hi;
}

inline double left_inverse(const PhiFunction& phi, const Point& x, double s) {
    if (s < 0.0) throw ArgumentError("left_inverse: s must be nonnegative");
    return left_inverse_fn([&](double t) { return phi(x, t); }, s);
}

// phi^{d/(d-1)} t^{-1/(d-1)}.
inline PhiFunction poincare_conjugate(const PhiFunction& phi, int d) {
    if (d < 2) throw ArgumentError("poincare_conjugate: dimension must be at least 2");
    const double e1 = static_cast<double>(d) / (d - 1);
    const double e2 = -1.0 / (d - 1);
    PhiFunction base = phi;
    auto fn = [base, e1, e2](const Point& x, double t) {
        double v = base(x, t);
        if (v == 0.0) return 0.0;
        return std::exp(e1 * std::log(v) + e2 * std::log(t));
    };
    return PhiFunction::custom(phi.domain(), fn, phi.is_x_independent(), "conjugate(" + phi.label() + ")")
        .with_focus(phi.focus_points());
}

// Lattice approximations of essinf / esssup of phi(.,t) over B intersected with the domain.
class BallBounds {
public:
    BallBounds(const PhiFunction& phi, const Ball& B) : phi_(phi), ball_(B) {
        if (phi.is_x_independent()) {
            Point c = phi.domain().contains(B.center) ? B.center : phi.anchor();
            pts_.push_back(c);
        } else {
            for (const auto& x : ball_lattice(B))
                if (phi.domain().contains(x)) pts_.push_back(x);
            for (const auto& f : phi.focus_points())
                if (B.contains(f) && phi.domain().contains(f)) pts_.push_back(f);
        }
        if (pts_.empty()) throw DomainError("ball does not meet the domain");
    }

    double lower(double t) const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& x : pts_) m = std::min(m, phi_(x, t));
        return m;
    }
    double upper(double t) const {
        double m = 0.0;
        for (const auto& x : pts_) m = std::max(m, phi_(x, t));
        return m;
    }
    // True iff upper(t) <= bound; stops at the first exceeding point.
    bool upper_at_most(double t, double bound) const {
        for (const auto& x : pts_)
            if (!(phi_(x, t) <= bound)) return false;
        return true;
    }
    const std::vector<Point>& points() const { return pts_; }
    const Ball& ball() const { return ball_; }

private:
    PhiFunction phi_;
    Ball ball_;
    std::vector<Point> pts_;
};

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

inline Bounds phi_bounds_on_ball(const PhiFunction& phi, const Ball& B, double t) {
    if (t < 0.0) throw ArgumentError("phi_bounds_on_ball: t must be nonnegative");
    BallBounds bb(phi, B);
    return {bb.lower(t), bb.upper(t)};
}

}  // namespace olab
