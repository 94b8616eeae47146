#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"
#include "olab/rearrangement.hpp"
#include "olab/sbv.hpp"

namespace olab {

struct InequalityReport {
    std::string form;
    std::string case_id;
    double lhs = 0.0;
    double rhs = 0.0;  // constant_used * rhs is the right-hand side
    double constant_used = 0.0;
    bool holds = false;
    int mesh = 0;
    double slack = 0.0;
};

inline constexpr double kQuadratureSlack = 1e-9;

inline InequalityReport make_report(std::string form, double lhs, double rhs, double C, int mesh,
                                    std::string case_id = {}) {
    InequalityReport r;
    r.form = std::move(form);
    r.case_id = std::move(case_id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant_used = C;
    r.mesh = mesh;
    r.slack = kQuadratureSlack * (std::abs(lhs) + std::abs(C * rhs)) + 1e-300;
    r.holds = lhs <= C * rhs + r.slack;
    return r;
}

// A hypothesis check failed; carries the failing report and its witness.
class HypothesisError : public PreconditionError {
public:
    explicit HypothesisError(PropertyReport rep)
        : PreconditionError(describe(rep)), report_(std::move(rep)) {}
    const PropertyReport& report() const noexcept { return report_; }

private:
    static std::string describe(const PropertyReport& r) {
        std::string s = "hypothesis " + r.property + " fails";
        if (r.witness) {
            s += " at x=(" + format_number(r.witness->x[0]) + "," + format_number(r.witness->x[1]) +
                 "), t=" + format_number(r.witness->t);
            if (r.witness->ball) s += ", radius=" + format_number(r.witness->ball->radius);
            s += ": " + r.witness->detail;
        }
        return s;
    }
    PropertyReport report_;
};

// Per-cell quantities of u on B shared by the Poincaré forms.
struct PoincareData {
    double r = 1.0;
    int d = 2;
    int mesh = 0;
    double w = 0.0;
    double ball_measure = 0.0;
    std::vector<double> median;
    std::vector<double> trunc_dev;  // |T_B u - med| / r
    std::vector<double> raw_dev;    // |u - med| / r
    std::vector<double> grad;       // |grad u|
    Thresholds thresholds;
    double changed_measure = 0.0;
};

namespace detail {

inline double deviation(const GridFunction& g, size_t c, const std::vector<double>& med) {
    double s = 0.0;
    for (int k = 0; k < g.components(); ++k) {
        double v = g.at(c, k) - med[k];
        s += v * v;
    }
    return std::sqrt(s);
}

inline double mean_of(const std::vector<double>& xs, const std::function<double(double)>& f) {
    double s = 0.0;
    for (double x : xs) s += f(x);
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace detail

inline PoincareData poincare_data(const SbvFunction& u, const Ball& B, double gamma_iso) {
    TruncationResult tr = truncate(u, B, gamma_iso);
    auto bs = detail::cells_in_ball(u.base(), B);
    PoincareData pd;
    pd.r = B.radius;
    pd.d = u.dim();
    pd.mesh = u.base().nx();
    pd.w = bs.w;
    pd.ball_measure = bs.measure();
    pd.median = median(u, B);
    pd.thresholds = tr.thresholds;
    pd.changed_measure = tr.changed_measure;
    for (size_t c : bs.cells) {
        pd.trunc_dev.push_back(detail::deviation(tr.u.base(), c, pd.median) / pd.r);
        pd.raw_dev.push_back(detail::deviation(u.base(), c, pd.median) / pd.r);
        pd.grad.push_back(u.gradient_norm(c));
    }
    return pd;
}

namespace detail {

inline void require_inc1(const PhiFunction& phi, const CheckConfig& cfg) {
    auto rep = check_inc(phi, 1.0, false, cfg);
    if (!rep.holds) throw HypothesisError(rep);
}

inline std::function<double(double)> scalar_phi(const PhiFunction& phi) {
    if (!phi.is_x_independent()) throw ArgumentError("an x-independent phi is required");
    Point x = phi.anchor();
    return [phi, x](double t) { return phi(x, t); };
}

// phi^{d/(d-1)} t^{-1/(d-1)} for a scalar phi.
inline std::function<double(double)> conjugate_of(std::function<double(double)> f, int d) {
    const double e1 = static_cast<double>(d) / (d - 1), e2 = -1.0 / (d - 1);
    return [f, e1, e2](double t) {
        if (t == 0.0) return 0.0;
        double v = f(t);
        return v == 0.0 ? 0.0 : std::exp(e1 * std::log(v) + e2 * std::log(t));
    };
}

inline double inverse_form_lhs(const std::function<double(double)>& f, const PoincareData& pd) {
    auto conj = conjugate_of(f, pd.d);
    double avg = mean_of(pd.trunc_dev, conj);
    return avg == 0.0 ? 0.0 : left_inverse_fn(conj, avg);
}

// phi^{-1}(avg phi(C |grad u|)).
inline double inverse_form_bracket(const std::function<double(double)>& f, const PoincareData& pd, double C) {
    double avg = mean_of(pd.grad, [&](double g) { return f(C * g); });
    return avg == 0.0 ? 0.0 : left_inverse_fn(f, avg);
}

}  // namespace detail

inline InequalityReport verify_poincare(const PhiFunction& phi, const SbvFunction& u, const Ball& B, double C,
                                        double gamma_iso, const CheckConfig& cfg = {}) {
    if (u.dim() < 2) throw ArgumentError("verify_poincare: dimension must be at least 2");
    auto f = detail::scalar_phi(phi);
    detail::require_inc1(phi, cfg);
    PoincareData pd = poincare_data(u, B, gamma_iso);
    return make_report("inv", detail::inverse_form_lhs(f, pd), detail::inverse_form_bracket(f, pd, C), C, pd.mesh);
}

inline InequalityReport verify_poincare(const PhiFunction& phi, const SbvFunction& u, const Ball& B, double C) {
    return verify_poincare(phi, u, B, C, default_gamma_iso(u.dim()));
}

// Smallest C with lhs <= C phi^{-1}(avg phi(C |grad u|)); infinity if no C up to 1e12 works.
inline double minimal_constant_inverse(const PhiFunction& phi, const PoincareData& pd) {
    auto f = detail::scalar_phi(phi);
    double lhs = detail::inverse_form_lhs(f, pd);
    if (lhs == 0.0) return 0.0;
    auto ok = [&](double C) { return lhs <= C * detail::inverse_form_bracket(f, pd, C); };
    double lo = 1e-12, hi = 1.0;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) return std::numeric_limits<double>::infinity();
    }
    while (ok(lo) && lo > 1e-12) lo *= 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        double m = 0.5 * (lo + hi);
        if (ok(m)) hi = m;
        else lo = m;
    }
    return hi;
}

// Averaged modular form: avg phi(|T u - med| / r) <= C avg phi(|grad u|).
inline InequalityReport verify_poincare_homogeneous(const PhiFunction& phi, const SbvFunction& u, const Ball& B,
                                                    double C, double gamma_iso, const CheckConfig& cfg = {}) {
    auto f = detail::scalar_phi(phi);
    detail::require_inc1(phi, cfg);
    auto K = doubling_constant(phi, cfg);
    if (!K.holds) throw HypothesisError(K);
    PoincareData pd = poincare_data(u, B, gamma_iso);
    return make_report("hom", detail::mean_of(pd.trunc_dev, f), detail::mean_of(pd.grad, f), C, pd.mesh);
}

inline InequalityReport verify_poincare_homogeneous(const PhiFunction& phi, const SbvFunction& u, const Ball& B,
                                                    double C) {
    return verify_poincare_homogeneous(phi, u, B, C, default_gamma_iso(u.dim()));
}

inline double minimal_constant_homogeneous(const PhiFunction& phi, const PoincareData& pd) {
    auto f = detail::scalar_phi(phi);
    double lhs = detail::mean_of(pd.trunc_dev, f), rhs = detail::mean_of(pd.grad, f);
    if (lhs == 0.0) return 0.0;
    return rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
}

// Log-log interpolation of a positive nondecreasing t -> F(t) on [1e-8, 1e8];
// exact evaluation outside that range.
class EnvelopeTable {
public:
    EnvelopeTable() = default;
    explicit EnvelopeTable(std::function<double(double)> exact, int nodes = 4097)
        : exact_(std::move(exact)), l0_(std::log(1e-8)), l1_(std::log(1e8)) {
        dl_ = (l1_ - l0_) / (nodes - 1);
        logv_.resize(nodes);
        for (int k = 0; k < nodes; ++k) {
            double v = exact_(std::exp(l0_ + k * dl_));
            if (!(v > 0.0) || !std::isfinite(v)) {
                logv_.clear();
                return;
            }
            logv_[k] = std::log(v);
        }
    }
    double operator()(double t) const {
        if (t == 0.0) return 0.0;
        if (logv_.empty()) return exact_(t);
        double l = std::log(t);
        if (l <= l0_ || l >= l1_) return exact_(t);
        double pos = (l - l0_) / dl_;
        size_t k = std::min(static_cast<size_t>(pos), logv_.size() - 2);
        double a = pos - static_cast<double>(k);
        return std::exp(logv_[k] + a * (logv_[k + 1] - logv_[k]));
    }

private:
    std::function<double(double)> exact_;
    std::vector<double> logv_;
    double l0_ = 0.0, l1_ = 0.0, dl_ = 1.0;
};

// Hypotheses of the generalized inequalities on B_r, checked once.
struct GeneralizedGate {
    Ball ball;
    double sigma = 0.0;
    double beta = 0.0;
    double K = 0.0;
    EnvelopeTable lower;  // phi^-_{B_r}
    EnvelopeTable upper;  // phi^+_{B_r}
};

inline GeneralizedGate generalized_gate(const PhiFunction& phi, const Ball& B, const CheckConfig& cfg = {}) {
    GeneralizedGate g;
    g.ball = B;
    auto a0 = check_A0(phi, cfg);
    if (!a0.holds) throw HypothesisError(a0);
    g.sigma = a0.constants.at("sigma");
    auto region = Domain::ball(B.dim, B.center, B.radius);
    auto ad = check_adA1(phi, adA1_test_balls(phi, region), cfg);
    if (!ad.holds) throw HypothesisError(ad);
    g.beta = ad.constants.at("beta");
    detail::require_inc1(phi, cfg);
    auto K = doubling_constant(phi, cfg);
    if (!K.holds) throw HypothesisError(K);
    g.K = K.constants.at("K");
    auto bb = std::make_shared<BallBounds>(phi, B);
    g.lower = EnvelopeTable([bb](double t) { return bb->lower(t); });
    g.upper = EnvelopeTable([bb](double t) { return bb->upper(t); });
    return g;
}

struct GeneralizedTerms {
    double p1_lhs = 0.0, p1_rhs = 0.0;
    double p2_lhs = 0.0, p2_rhs = 0.0;
    int mesh = 0;
};

inline GeneralizedTerms generalized_terms(const GeneralizedGate& g, const PhiFunction& phi, const SbvFunction& u,
                                          double gamma_iso) {
    const Ball& B = g.ball;
    PhiTruncation pt = phi_truncate(phi, u, B, gamma_iso);
    auto bs = detail::cells_in_ball(u.base(), B);
    const double r = B.radius;
    std::vector<double> dev, raw, grad;
    for (size_t c : bs.cells) {
        dev.push_back(detail::deviation(pt.u.base(), c, pt.median) / r);
        raw.push_back(detail::deviation(u.base(), c, pt.median) / r);
        grad.push_back(u.gradient_norm(c));
    }
    std::function<double(double)> lo = [&](double t) { return g.lower(t); };
    std::function<double(double)> up = [&](double t) { return g.upper(t); };
    auto conj_lo = detail::conjugate_of(lo, u.dim());
    auto conj_up = detail::conjugate_of(up, u.dim());
    GeneralizedTerms T;
    T.mesh = u.base().nx();
    double a = detail::mean_of(dev, conj_up);
    T.p1_lhs = a == 0.0 ? 0.0 : left_inverse_fn(conj_lo, a);
    double b = detail::mean_of(grad, lo);
    T.p1_rhs = (b == 0.0 ? 0.0 : left_inverse_fn(lo, b)) + g.sigma;
    T.p2_lhs = detail::mean_of(dev, up);
    T.p2_rhs = b + detail::mean_of(raw, [&](double v) { return up(std::min(v, g.sigma)); });
    return T;
}

// Reports for (P1) and (P2); the modular form (P2) is averaged over B_r.
inline std::pair<InequalityReport, InequalityReport> verify_poincare_generalized(const GeneralizedGate& g,
                                                                                 const PhiFunction& phi,
                                                                                 const SbvFunction& u, double C,
                                                                                 double gamma_iso) {
    if (u.dim() < 2) throw ArgumentError("verify_poincare_generalized: dimension must be at least 2");
    auto T = generalized_terms(g, phi, u, gamma_iso);
    return {make_report("P1", T.p1_lhs, T.p1_rhs, C, T.mesh), make_report("P2", T.p2_lhs, T.p2_rhs, C, T.mesh)};
}

inline std::pair<InequalityReport, InequalityReport> verify_poincare_generalized(const PhiFunction& phi,
                                                                                 const SbvFunction& u, const Ball& B,
                                                                                 double C) {
    return verify_poincare_generalized(generalized_gate(phi, B), phi, u, C, default_gamma_iso(u.dim()));
}

namespace detail {

struct HardyTerms {
    double lhs = 0.0;
    std::vector<double> s, h;
    double w = 0.0;
};

inline HardyTerms hardy_terms(const std::function<double(double)>& f, const GridFunction& h, int d) {
    if (h.dim() != 1 || h.components() != 1) throw ArgumentError("verify_hardy: h must be a scalar 1D grid function");
    HardyTerms T;
    T.w = h.cell_measure();
    const double s0 = h.domain().lo[0];
    const size_t n = h.cells();
    std::vector<double> tail(n, 0.0);
    double acc = 0.0;
    for (size_t k = n; k-- > 0;) {
        double v = h.at(k);
        if (!(v >= 0.0)) throw ArgumentError("verify_hardy: h must be nonnegative");
        tail[k] = acc + 0.5 * v * T.w;
        acc += v * T.w;
    }
    auto conj = conjugate_of(f, d);
    double sum = 0.0;
    for (size_t k = 0; k < n; ++k) {
        sum += conj(tail[k]) * T.w;
        T.s.push_back(h.center(k)[0] - s0);
        T.h.push_back(h.at(k));
    }
    T.lhs = sum == 0.0 ? 0.0 : left_inverse_fn(conj, sum);
    return T;
}

inline double hardy_rhs(const std::function<double(double)>& f, const HardyTerms& T, int d, double c1) {
    const double e = static_cast<double>(d - 1) / d;
    double sum = 0.0;
    for (size_t k = 0; k < T.s.size(); ++k) sum += f(c1 * std::pow(T.s[k], e) * T.h[k]) * T.w;
    return sum == 0.0 ? 0.0 : left_inverse_fn(f, sum);
}

}  // namespace detail

// h is a grid function on the interval (0, l); lhs <= c1 * rhs encodes the Hardy inequality.
inline InequalityReport verify_hardy(const PhiFunction& phi, const GridFunction& h, int d, double c1,
                                     const CheckConfig& cfg = {}) {
    if (d < 2) throw ArgumentError("verify_hardy: dimension must be at least 2");
    auto f = detail::scalar_phi(phi);
    detail::require_inc1(phi, cfg);
    auto T = detail::hardy_terms(f, h, d);
    double full = detail::hardy_rhs(f, T, d, c1);
    return make_report("hardy", T.lhs, c1 > 0.0 ? full / c1 : 0.0, c1, h.nx());
}

inline double minimal_constant_hardy(const PhiFunction& phi, const GridFunction& h, int d) {
    auto f = detail::scalar_phi(phi);
    auto T = detail::hardy_terms(f, h, d);
    if (T.lhs == 0.0) return 0.0;
    auto ok = [&](double c) { return T.lhs <= detail::hardy_rhs(f, T, d, c); };
    double lo = 0.0, hi = 1.0;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        double m = 0.5 * (lo + hi);
        if (ok(m)) hi = m;
        else lo = m;
    }
    return hi;
}

// Discrete surrogate for the absolute continuity of (T_B u)^0 and the
// rearranged-derivative inequality with c = 1/gamma_iso.
struct ProfileSurrogate {
    double max_gap = 0.0;       // largest value gap of the profile inside [lambda, |B| - lambda]
    double cell_quantum = 0.0;  // largest difference across non-jump neighbours in B
    double lhs = 0.0;           // int psi(c min{s,|B|-s}^{(d-1)/d} (-du0/ds)) ds
    double rhs = 0.0;           // int_B psi(2 |grad u|)
    bool continuous = false;
    bool inequality = false;
};

inline ProfileSurrogate profile_surrogate(const SbvFunction& u, const Ball& B, const std::function<double(double)>& psi,
                                          double gamma_iso, int window = 0) {
    if (u.components() != 1) throw ArgumentError("profile_surrogate: scalar u required");
    TruncationResult tr = truncate(u, B, gamma_iso);
    auto bs = detail::cells_in_ball(u.base(), B);
    const GridFunction& tu = tr.u.base();
    ProfileSurrogate ps;
    std::vector<char> in(tu.cells(), 0);
    for (size_t c : bs.cells) in[c] = 1;
    for (size_t c : bs.cells)
        for (int a = 0; a < tu.dim(); ++a) {
            const auto& e = tr.u.stencil().entry(c, a);
            for (size_t nb : {e.plus, e.minus})
                if (nb != c && in[nb]) ps.cell_quantum = std::max(ps.cell_quantum, std::abs(tu.at(nb) - tu.at(c)));
        }
    std::vector<double> v;
    for (size_t c : bs.cells) v.push_back(tu.at(c));
    std::sort(v.begin(), v.end(), std::greater<>());
    const size_t n = v.size();
    const double w = bs.w, M = bs.measure(), lam = tr.thresholds.lambda;
    for (size_t k = 0; k + 1 < n; ++k) {
        double s = static_cast<double>(k + 1) * w;
        if (s >= lam && s <= M - lam) ps.max_gap = std::max(ps.max_gap, v[k] - v[k + 1]);
    }
    ps.continuous = ps.max_gap <= ps.cell_quantum * (1.0 + 1e-12);
    const int d = u.dim();
    const double c = 1.0 / gamma_iso, e = static_cast<double>(d - 1) / d;
    const size_t W = window > 0 ? static_cast<size_t>(window)
                                : std::max<size_t>(1, static_cast<size_t>(std::sqrt(static_cast<double>(n))));
    for (size_t k = 0; k + W < n; k += W) {
        double s = (static_cast<double>(k) + 0.5 + 0.5 * W) * w;
        double slope = (v[k] - v[k + W]) / (static_cast<double>(W) * w);
        ps.lhs += psi(c * std::pow(std::min(s, M - s), e) * slope) * static_cast<double>(W) * w;
    }
    for (size_t cidx : bs.cells) ps.rhs += psi(2.0 * u.gradient_norm(cidx)) * w;
    ps.inequality = ps.lhs <= ps.rhs * (1.0 + kQuadratureSlack);
    return ps;
}

}  // namespace olab
