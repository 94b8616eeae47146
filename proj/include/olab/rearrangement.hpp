#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/grid.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"
#include "olab/sbv.hpp"

namespace olab {

// Relative isoperimetric constant in the unit ball. For d = 2 the default is
// 1 / min over chord cuts t of 2 sqrt(1-t^2) / sqrt(acos t - t sqrt(1-t^2)),
// computed by isoperimetric_chord_constant().
inline double isoperimetric_chord_constant() {
    auto ratio = [](double t) {
        double cap = std::acos(t) - t * std::sqrt(1.0 - t * t);
        return 2.0 * std::sqrt(1.0 - t * t) / std::sqrt(cap);
    };
    double best = ratio(0.0);
    const int n = 20000;
    for (int k = 1; k < n; ++k) best = std::min(best, ratio(0.999 * k / n));
    return 1.0 / best;
}

inline double default_gamma_iso(int d) {
    if (d == 1) return 1.0;
    if (d == 2) return 0.62665706865775012;  // isoperimetric_chord_constant()
    throw ArgumentError("gamma_iso: dimension must be 1 or 2");
}

namespace detail {

struct BallSample {
    std::vector<size_t> cells;  // cells of the grid with center in B
    double w = 0.0;             // cell measure
    double measure() const { return static_cast<double>(cells.size()) * w; }
};

inline BallSample cells_in_ball(const GridFunction& g, const Ball& B) {
    if (!g.domain().contains_ball(B, 1e-9))
        throw DomainError("ball is not contained in the domain");
    BallSample s;
    s.w = g.cell_measure();
    for (size_t c = 0; c < g.cells(); ++c)
        if (g.active(c) && B.contains(g.center(c))) s.cells.push_back(c);
    if (s.cells.empty()) throw DomainError("ball contains no cell centers");
    return s;
}

inline int pick_component(const GridFunction& g, std::optional<int> comp) {
    if (!comp) {
        if (g.components() != 1) throw ArgumentError("vector-valued input needs a component selector");
        return 0;
    }
    if (*comp < 0 || *comp >= g.components()) throw ArgumentError("component out of range");
    return *comp;
}

// Distinct ascending values and their cell counts.
struct ValueCounts {
    std::vector<double> values;
    std::vector<long> counts;
    long total = 0;
};

inline ValueCounts value_counts(std::vector<double> v) {
    std::stable_sort(v.begin(), v.end());
    ValueCounts vc;
    for (double x : v) {
        if (vc.values.empty() || x != vc.values.back()) {
            vc.values.push_back(x);
            vc.counts.push_back(0);
        }
        ++vc.counts.back();
    }
    vc.total = static_cast<long>(v.size());
    return vc;
}

}  // namespace detail

// t -> measure of {x in B : u(x) > t}, exact from cell counts.
class DistributionFunction {
public:
    DistributionFunction(detail::ValueCounts vc, double w) : vc_(std::move(vc)), w_(w) {
        above_.assign(vc_.values.size(), 0);
        long acc = 0;
        for (size_t k = vc_.values.size(); k-- > 0;) {
            above_[k] = acc;
            acc += vc_.counts[k];
        }
    }

    double operator()(double t) const { return static_cast<double>(count_above(t)) * w_; }
    long count_above(double t) const {
        auto it = std::upper_bound(vc_.values.begin(), vc_.values.end(), t);
        if (it == vc_.values.end()) return 0;
        size_t k = static_cast<size_t>(it - vc_.values.begin());
        return above_[k] + vc_.counts[k];
    }
    const std::vector<double>& breakpoints() const { return vc_.values; }
    double total_measure() const { return static_cast<double>(vc_.total) * w_; }
    double cell_measure() const { return w_; }
    const detail::ValueCounts& counts() const { return vc_; }

private:
    detail::ValueCounts vc_;
    std::vector<long> above_;
    double w_;
};

inline DistributionFunction distribution_function(const GridFunction& u, const Ball& B,
                                                   std::optional<int> comp = std::nullopt) {
    int k = detail::pick_component(u, comp);
    auto s = detail::cells_in_ball(u, B);
    std::vector<double> v;
    v.reserve(s.cells.size());
    for (size_t c : s.cells) v.push_back(u.at(c, k));
    return DistributionFunction(detail::value_counts(std::move(v)), s.w);
}

inline DistributionFunction distribution_function(const SbvFunction& u, const Ball& B,
                                                  std::optional<int> comp = std::nullopt) {
    return distribution_function(u.base(), B, comp);
}

enum class ProfileKind { Signed, Nonnegative };

// Non-increasing right-continuous step profile on [0, |B|): segment k covers
// [start_k w, (start_k + count_k) w) with value value_k.
class RearrangementProfile {
public:
    struct Segment {
        long start;
        long count;
        double value;
    };

    RearrangementProfile(ProfileKind kind, const detail::ValueCounts& vc, double w) : kind_(kind), w_(w) {
        long start = 0;
        for (size_t k = vc.values.size(); k-- > 0;) {
            segs_.push_back({start, vc.counts[k], vc.values[k]});
            start += vc.counts[k];
        }
        total_ = start;
    }

    double operator()(double s) const {
        if (s < 0.0) throw ArgumentError("profile: s must be nonnegative");
        if (s >= measure()) return kind_ == ProfileKind::Signed ? -std::numeric_limits<double>::infinity() : 0.0;
        double units = s / w_ + 1e-9;  // s = k w must land on segment k despite roundoff
        auto it = std::upper_bound(segs_.begin(), segs_.end(), units,
                                   [](double x, const Segment& sg) { return x < static_cast<double>(sg.start); });
        return std::prev(it)->value;
    }
    // Left limit at s > 0.
    double left_limit(double s) const {
        if (s <= 0.0) return segs_.front().value;
        double units = s / w_ - 1e-9;
        auto it = std::lower_bound(segs_.begin(), segs_.end(), units,
                                   [](const Segment& sg, double x) { return static_cast<double>(sg.start) < x; });
        return std::prev(it)->value;
    }

    // Measure of {s : profile(s) > t}, from the same integer counts as the source.
    double distribution(double t) const {
        long n = 0;
        for (const auto& sg : segs_)
            if (sg.value > t) n += sg.count;
        return static_cast<double>(n) * w_;
    }

    const std::vector<Segment>& segments() const { return segs_; }
    double measure() const { return static_cast<double>(total_) * w_; }
    double cell_measure() const { return w_; }
    ProfileKind kind() const { return kind_; }
    // Breakpoints as (s, value) pairs.
    std::vector<std::pair<double, double>> breakpoints() const {
        std::vector<std::pair<double, double>> out;
        for (const auto& sg : segs_) out.push_back({static_cast<double>(sg.start) * w_, sg.value});
        return out;
    }

private:
    ProfileKind kind_;
    double w_;
    long total_ = 0;
    std::vector<Segment> segs_;
};

inline RearrangementProfile signed_rearrangement(const GridFunction& u, const Ball& B,
                                                 std::optional<int> comp = std::nullopt) {
    auto nu = distribution_function(u, B, comp);
    return RearrangementProfile(ProfileKind::Signed, nu.counts(), nu.cell_measure());
}

inline RearrangementProfile signed_rearrangement(const SbvFunction& u, const Ball& B,
                                                 std::optional<int> comp = std::nullopt) {
    return signed_rearrangement(u.base(), B, comp);
}

inline RearrangementProfile nonnegative_rearrangement(const GridFunction& u, const Ball& B) {
    auto s = detail::cells_in_ball(u, B);
    std::vector<double> v;
    for (size_t c : s.cells) v.push_back(u.magnitude(c));
    return RearrangementProfile(ProfileKind::Nonnegative, detail::value_counts(std::move(v)), s.w);
}

namespace detail {

// Smallest value v with measure{u <= v} >= s (s in cell units); s = 0 gives the minimum.
inline double lower_quantile(const ValueCounts& vc, double units) {
    long cum = 0;
    const double eps = 1e-9 * std::max(1.0, units);
    for (size_t k = 0; k < vc.values.size(); ++k) {
        cum += vc.counts[k];
        if (static_cast<double>(cum) >= units - eps) return vc.values[k];
    }
    return vc.values.back();
}

inline ValueCounts component_counts(const GridFunction& g, const BallSample& s, int k) {
    std::vector<double> v;
    v.reserve(s.cells.size());
    for (size_t c : s.cells) v.push_back(g.at(c, k));
    return value_counts(std::move(v));
}

}  // namespace detail

inline std::vector<double> quantile(const GridFunction& u, const Ball& B, double s) {
    auto bs = detail::cells_in_ball(u, B);
    const double M = bs.measure();
    if (!(s >= 0.0) || s > M * (1.0 + 1e-12)) throw ArgumentError("quantile: s out of [0, |B|]");
    std::vector<double> out;
    for (int k = 0; k < u.components(); ++k)
        out.push_back(detail::lower_quantile(detail::component_counts(u, bs, k), s / bs.w));
    return out;
}

inline std::vector<double> quantile(const SbvFunction& u, const Ball& B, double s) { return quantile(u.base(), B, s); }

inline double ball_cell_measure(const GridFunction& u, const Ball& B) { return detail::cells_in_ball(u, B).measure(); }

inline std::vector<double> median(const GridFunction& u, const Ball& B) {
    return quantile(u, B, 0.5 * ball_cell_measure(u, B));
}
inline std::vector<double> median(const SbvFunction& u, const Ball& B) { return median(u.base(), B); }

struct Thresholds {
    std::vector<double> lower;  // tau'
    std::vector<double> upper;  // tau''
    double lambda = 0.0;
    double ball_measure = 0.0;
    double jump_measure = 0.0;
};

inline double small_jump_lambda(double jump_measure, int d, double gamma_iso) {
    if (d == 1) return jump_measure == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(2.0 * gamma_iso * jump_measure, static_cast<double>(d) / (d - 1));
}

inline Thresholds truncation_thresholds(const SbvFunction& u, const Ball& B, double gamma_iso) {
    auto bs = detail::cells_in_ball(u.base(), B);
    Thresholds th;
    th.ball_measure = bs.measure();
    th.jump_measure = jump_measure_in(u, B);
    th.lambda = small_jump_lambda(th.jump_measure, u.dim(), gamma_iso);
    if (!(th.lambda <= 0.5 * th.ball_measure))
        throw PreconditionError("small-jump condition fails: (2 gamma H(J))^(d/(d-1)) = " +
                                    format_number(th.lambda) + " > |B|/2 = " + format_number(0.5 * th.ball_measure),
                                th.lambda, 0.5 * th.ball_measure);
    for (int k = 0; k < u.components(); ++k) {
        auto vc = detail::component_counts(u.base(), bs, k);
        th.lower.push_back(detail::lower_quantile(vc, th.lambda / bs.w));
        th.upper.push_back(detail::lower_quantile(vc, (th.ball_measure - th.lambda) / bs.w));
    }
    return th;
}

inline double default_gamma_for(const SbvFunction& u) { return default_gamma_iso(u.dim()); }

struct TruncationResult {
    SbvFunction u;
    Thresholds thresholds;
    double changed_measure = 0.0;  // |{T u != u} in B|
    double bound = 0.0;            // 2 * lambda
};

namespace detail {

// Clamps the cells of B componentwise into [lo_k, hi_k] and rebuilds the jump
// set: facets keep their amplitude unless a side was clamped, and facets whose
// clamped sides agree are dropped.
inline std::pair<SbvFunction, double> clamp_in_ball(const SbvFunction& u, const BallSample& bs,
                                                    const std::vector<double>& lo, const std::vector<double>& hi) {
    const GridFunction& g = u.base();
    const int m = g.components();
    GridFunction out = g;
    std::vector<char> clamped(g.cells(), 0);
    long changed = 0;
    for (size_t c : bs.cells) {
        bool any = false;
        for (int k = 0; k < m; ++k) {
            double v = std::clamp(g.at(c, k), lo[k], hi[k]);
            if (v != g.at(c, k)) any = true;
            out.at(c, k) = v;
        }
        if (any) {
            clamped[c] = 1;
            ++changed;
        }
    }
    JumpSet J;
    for (const auto& f : u.jumps().facets()) {
        size_t a = g.index(f.i, f.j);
        size_t b = f.axis == 0 ? g.index(f.i + 1, f.j) : g.index(f.i, f.j + 1);
        JumpFacet nf = f;
        if (clamped[a] || clamped[b]) {
            bool nonzero = false;
            for (int k = 0; k < m; ++k) {
                double plus = f.nu_sign > 0 ? out.at(b, k) : out.at(a, k);
                double minus = f.nu_sign > 0 ? out.at(a, k) : out.at(b, k);
                nf.amp[k] = plus - minus;
                nonzero = nonzero || nf.amp[k] != 0.0;
            }
            if (!nonzero) continue;
        }
        J.add(std::move(nf));
    }
    return {SbvFunction::build(std::move(out), std::move(J)), static_cast<double>(changed) * bs.w};
}

}  // namespace detail

inline TruncationResult truncate(const SbvFunction& u, const Ball& B, double gamma_iso) {
    Thresholds th = truncation_thresholds(u, B, gamma_iso);
    auto bs = detail::cells_in_ball(u.base(), B);
    auto [v, changed] = detail::clamp_in_ball(u, bs, th.lower, th.upper);
    TruncationResult r{std::move(v), th, changed, 2.0 * th.lambda};
    if (!(r.changed_measure <= r.bound * (1.0 + 1e-12) + 1e-300))
        throw InvariantError("truncated-difference bound violated: " + format_number(r.changed_measure) + " > " +
                             format_number(r.bound));
    return r;
}

inline TruncationResult truncate(const SbvFunction& u, const Ball& B) { return truncate(u, B, default_gamma_for(u)); }

struct PhiTruncation {
    SbvFunction u;
    std::vector<double> median;
    double radius = 0.0;  // r * (phi^-_B)^{-1}(1/(2r))
};

inline PhiTruncation phi_truncate(const PhiFunction& phi, const SbvFunction& u, const Ball& B, double gamma_iso,
                                  const CheckConfig& cfg = {}) {
    if (!check_A0(phi, cfg).holds) throw PreconditionError("phi_truncate: (A0) does not hold");
    TruncationResult tr = truncate(u, B, gamma_iso);
    BallBounds bb(phi, B);
    const double r = B.radius;
    const double R = r * left_inverse_fn([&](double t) { return bb.lower(t); }, 1.0 / (2.0 * r));
    auto med = median(u, B);
    std::vector<double> lo(med.size()), hi(med.size());
    for (size_t k = 0; k < med.size(); ++k) {
        lo[k] = med[k] - R;
        hi[k] = med[k] + R;
    }
    auto bs = detail::cells_in_ball(u.base(), B);
    auto [v, changed] = detail::clamp_in_ball(tr.u, bs, lo, hi);
    (void)changed;
    return {std::move(v), med, R};
}

}  // namespace olab
