#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/phi.hpp"
#include "olab/random.hpp"

namespace olab {

struct Witness {
    Point x{0.0, 0.0};
    double t = 0.0;
    std::optional<Ball> ball;
    double value = 0.0;
    std::string detail;
};

struct SamplingInfo {
    std::uint64_t seed = 0;
    int x_samples = 0;
    int t_samples = 0;
    double t_min = 0.0;
    double t_max = 0.0;
};

struct PropertyReport {
    std::string property;
    bool holds = false;
    std::map<std::string, double> constants;
    std::optional<Witness> witness;
    SamplingInfo sampling;
    std::string note;

    void fail(Witness w) {
        holds = false;
        constants.clear();
        witness = std::move(w);
    }
};

struct CheckConfig {
    std::uint64_t seed = 0;
    double t_min = 1e-4;
    double t_max = 1e4;
    int t_samples = 512;
    int search_points = 128;
    double beta_floor = 1e-6;
    double sigma_max = 1e4;
    double L_max = 1e4;
    int random_points = 16;
    // Almost-monotonicity: the fitted constant may not grow when the t-range widens.
    double saturation_tol = 1e-3;
    double doubling_growth_tol = 0.05;
    double equivalence_growth_tol = 0.05;
    int shrink_steps = 40;
    int interval_t_samples = 64;
};

namespace detail {

inline const double kApproach[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-12, 1e-16, 1e-32, 1e-64, 1e-128, 1e-256};

inline std::vector<Point> sample_points(const PhiFunction& phi, const CheckConfig& cfg) {
    if (phi.is_x_independent()) return {phi.anchor()};
    const Domain& D = phi.domain();
    std::vector<Point> pts = domain_lattice(D);
    for (const auto& f : phi.focus_points()) {
        if (D.contains(f)) pts.push_back(f);
        for (double h : kApproach) {
            for (int axis = 0; axis < D.dim; ++axis) {
                for (double sgn : {-1.0, 1.0}) {
                    Point y = f;
                    y[axis] += sgn * h;
                    if (D.contains(y)) pts.push_back(y);
                }
            }
        }
    }
    Rng rng(derive_seed(cfg.seed, 17));
    int added = 0;
    while (added < cfg.random_points) {
        Point y{rng.uniform(D.lo[0], D.hi[0]), D.dim > 1 ? rng.uniform(D.lo[1], D.hi[1]) : 0.0};
        if (D.contains(y)) {
            pts.push_back(y);
            ++added;
        }
    }
    return pts;
}

inline SamplingInfo sampling_info(const CheckConfig& cfg, size_t nx, int nt, double tmin, double tmax) {
    return SamplingInfo{cfg.seed, static_cast<int>(nx), nt, tmin, tmax};
}

// Ratio g(x,t) = phi(x,t)/t^p evaluated in log space.
inline double power_ratio(double v, double t, double p) {
    if (v == 0.0) return 0.0;
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    return std::exp(std::log(v) - p * std::log(t));
}

// Monotonicity fit for g along the t-grid. increasing=true fits (aInc).
struct MonotoneFit {
    double a = 1.0;
    size_t arg_t = 0;
    bool strict_ok = true;
    size_t strict_fail_t = 0;
};

inline MonotoneFit fit_monotone(const std::vector<double>& g, size_t k0, size_t k1, bool increasing) {
    MonotoneFit fit;
    double extreme = std::numeric_limits<double>::quiet_NaN();
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (size_t k = k0; k < k1; ++k) {
        double v = g[k];
        if (v == 0.0) continue;
        if (!std::isnan(prev)) {
            bool ok = increasing ? (v >= prev * (1.0 - 1e-9)) : (v <= prev * (1.0 + 1e-9));
            if (!ok && fit.strict_ok) {
                fit.strict_ok = false;
                fit.strict_fail_t = k;
            }
        }
        prev = v;
        if (std::isnan(extreme)) {
            extreme = v;
            continue;
        }
        double ratio = increasing ? extreme / v : v / extreme;
        if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
        if (ratio > fit.a) {
            fit.a = ratio;
            fit.arg_t = k;
        }
        extreme = increasing ? std::max(extreme, v) : std::min(extreme, v);
    }
    return fit;
}

inline void inner_range(size_t n, size_t& k0, size_t& k1) {
    k0 = n / 4;
    k1 = n - n / 4;
}

inline PropertyReport check_monotone(const PhiFunction& phi, double p, bool almost, bool increasing,
                                     const CheckConfig& cfg) {
    if (!(p > 0)) throw ArgumentError("exponent must be positive");
    PropertyReport rep;
    rep.property = std::string(almost ? "a" : "") + (increasing ? "Inc" : "Dec");
    auto ts = log_grid(cfg.t_min, cfg.t_max, cfg.t_samples);
    auto xs = sample_points(phi, cfg);
    rep.sampling = sampling_info(cfg, xs.size(), cfg.t_samples, cfg.t_min, cfg.t_max);
    size_t i0, i1;
    inner_range(ts.size(), i0, i1);
    double a_full = 1.0, a_inner = 1.0;
    Witness worst;
    std::vector<double> g(ts.size());
    for (const auto& x : xs) {
        for (size_t k = 0; k < ts.size(); ++k) g[k] = power_ratio(phi(x, ts[k]), ts[k], p);
        MonotoneFit full = fit_monotone(g, 0, ts.size(), increasing);
        if (!almost && !full.strict_ok) {
            size_t k = full.strict_fail_t;
            rep.fail({x, ts[k], std::nullopt, g[k],
                      "phi(x,t)/t^p not " + std::string(increasing ? "increasing" : "decreasing")});
            return rep;
        }
        MonotoneFit inner = fit_monotone(g, i0, i1, increasing);
        a_inner = std::max(a_inner, inner.a);
        if (!(full.a <= a_full)) {
            a_full = full.a;
            worst = {x, ts[full.arg_t], std::nullopt, full.a, "fitted constant"};
        }
    }
    if (!almost) {
        rep.holds = true;
        rep.constants["a"] = 1.0;
        rep.constants["p"] = p;
        return rep;
    }
    if (!std::isfinite(a_full) || a_full > a_inner * (1.0 + cfg.saturation_tol)) {
        worst.detail = "almost-monotone constant grows with the t-range (inner " + format_number(a_inner) + ")";
        rep.fail(worst);
        return rep;
    }
    rep.holds = true;
    rep.constants["a"] = a_full;
    rep.constants["p"] = p;
    return rep;
}

}  // namespace detail

inline PropertyReport check_inc(const PhiFunction& phi, double p, bool almost, const CheckConfig& cfg = {}) {
    return detail::check_monotone(phi, p, almost, true, cfg);
}

inline PropertyReport check_dec(const PhiFunction& phi, double q, bool almost, const CheckConfig& cfg = {}) {
    return detail::check_monotone(phi, q, almost, false, cfg);
}

inline PropertyReport doubling_constant(const PhiFunction& phi, const CheckConfig& cfg = {}) {
    PropertyReport rep;
    rep.property = "doubling";
    auto ts = log_grid(cfg.t_min, cfg.t_max, cfg.t_samples);
    auto xs = detail::sample_points(phi, cfg);
    rep.sampling = detail::sampling_info(cfg, xs.size(), cfg.t_samples, cfg.t_min, cfg.t_max);
    size_t i0, i1;
    detail::inner_range(ts.size(), i0, i1);
    double K = 0.0, K_inner = 0.0;
    Witness worst;
    for (const auto& x : xs) {
        for (size_t k = 0; k < ts.size(); ++k) {
            double v = phi(x, ts[k]);
            if (v == 0.0) continue;
            double ratio = phi(x, 2.0 * ts[k]) / v;
            if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
            if (k >= i0 && k < i1) K_inner = std::max(K_inner, ratio);
            if (!(ratio <= K)) {
                K = ratio;
                worst = {x, ts[k], std::nullopt, ratio, "phi(x,2t)/phi(x,t)"};
            }
        }
    }
    if (!std::isfinite(K) || K > K_inner * (1.0 + cfg.doubling_growth_tol)) {
        worst.detail = "doubling ratio grows with the t-range";
        rep.fail(worst);
        return rep;
    }
    rep.holds = true;
    rep.constants["K"] = K;
    return rep;
}

inline PropertyReport check_A0(const PhiFunction& phi, const CheckConfig& cfg = {}) {
    PropertyReport rep;
    rep.property = "A0";
    auto xs = detail::sample_points(phi, cfg);
    rep.sampling = detail::sampling_info(cfg, xs.size(), cfg.search_points, 1.0, cfg.sigma_max);
    auto passes = [&](double sigma, Witness* w) {
        for (const auto& x : xs) {
            double lo = phi(x, 1.0 / sigma), hi = phi(x, sigma);
            if (!(lo <= 1.0 + 1e-12)) {
                if (w) *w = {x, 1.0 / sigma, std::nullopt, lo, "phi(x,1/sigma) > 1"};
                return false;
            }
            if (!(hi >= 1.0 - 1e-12)) {
                if (w) *w = {x, sigma, std::nullopt, hi, "phi(x,sigma) < 1"};
                return false;
            }
        }
        return true;
    };
    auto grid = log_grid(1.0, cfg.sigma_max, cfg.search_points);
    size_t lo = 0, hi = grid.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (passes(grid[mid], nullptr)) hi = mid;
        else lo = mid + 1;
    }
    if (lo == grid.size()) {
        Witness w;
        passes(cfg.sigma_max, &w);
        w.detail += " at the largest sigma searched";
        rep.fail(w);
        return rep;
    }
    double sigma = grid[lo];
    if (lo > 0) {
        double a = grid[lo - 1], b = grid[lo];
        for (int it = 0; it < 200 && b - a > 1e-10 * b; ++it) {
            double m = 0.5 * (a + b);
            if (passes(m, nullptr)) b = m;
            else a = m;
        }
        sigma = b;
    }
    rep.holds = true;
    rep.constants["sigma"] = sigma;
    return rep;
}

namespace detail {

enum class A1Threshold { Diameter, Measure };

inline PropertyReport check_A1_family(const PhiFunction& phi, const std::vector<Ball>& balls, A1Threshold kind,
                                      const CheckConfig& cfg) {
    PropertyReport rep;
    rep.property = kind == A1Threshold::Diameter ? "adA1" : "A1";
    for (const auto& B : balls) {
        double size = kind == A1Threshold::Diameter ? B.diameter() : B.measure();
        if (size > 1.0 + 1e-12)
            throw ArgumentError(rep.property + ": balls must have " +
                                (kind == A1Threshold::Diameter ? "diameter" : "measure") + " at most 1");
    }
    PropertyReport a0 = check_A0(phi, cfg);
    if (!a0.holds) throw PreconditionError(rep.property + ": (A0) does not hold, sigma unavailable");
    const double sigma = a0.constants.at("sigma");
    auto betas = log_grid(cfg.beta_floor, 1.0, cfg.search_points + 1);
    betas.pop_back();
    double worst = betas.back();
    Witness worst_w;
    worst_w.value = worst;
    size_t nx = 0;
    for (const auto& B : balls) {
        BallBounds bb(phi, B);
        nx += bb.points().size();
        double size = kind == A1Threshold::Diameter ? B.diameter() : B.measure();
        double T = left_inverse_fn([&](double t) { return bb.lower(t); }, 1.0 / size);
        if (!(T > sigma)) continue;
        auto ts = log_grid(sigma, T, cfg.t_samples);
        for (double t : ts) {
            double low = bb.lower(t) * (1.0 + 1e-12);
            auto ok = [&](size_t k) { return bb.upper_at_most(betas[k] * t, low); };
            if (!ok(0)) {
                rep.sampling = sampling_info(cfg, nx, cfg.t_samples, sigma, T);
                rep.fail({B.center, t, B, betas[0],
                          "no beta above the floor: phi+(beta t) > phi-(t) at radius " + format_number(B.radius)});
                return rep;
            }
            size_t lo = 0, hi = betas.size() - 1;
            while (lo < hi) {
                size_t mid = (lo + hi + 1) / 2;
                if (ok(mid)) lo = mid;
                else hi = mid - 1;
            }
            if (betas[lo] < worst) {
                worst = betas[lo];
                worst_w = {B.center, t, B, worst, "smallest admissible beta"};
            }
        }
    }
    rep.sampling = sampling_info(cfg, nx, cfg.t_samples, sigma, 0.0);
    rep.holds = true;
    rep.constants["beta"] = worst;
    rep.constants["sigma"] = sigma;
    return rep;
}

}  // namespace detail

inline PropertyReport check_adA1(const PhiFunction& phi, const std::vector<Ball>& balls, const CheckConfig& cfg = {}) {
    return detail::check_A1_family(phi, balls, detail::A1Threshold::Diameter, cfg);
}

inline PropertyReport check_A1(const PhiFunction& phi, const std::vector<Ball>& balls, const CheckConfig& cfg = {}) {
    return detail::check_A1_family(phi, balls, detail::A1Threshold::Measure, cfg);
}

// Default test balls of diameter <= 1 inside a ball or box region: a lattice of
// centers at two radii plus shrinking balls at each focus point.
inline std::vector<Ball> adA1_test_balls(const PhiFunction& phi, const Domain& region) {
    std::vector<Ball> out;
    const int d = region.dim;
    for (double r : {0.5, 0.125}) {
        const int k = 3;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < (d > 1 ? k : 1); ++j) {
                Point c{region.lo[0] + (region.hi[0] - region.lo[0]) * (i + 0.5) / k,
                        d > 1 ? region.lo[1] + (region.hi[1] - region.lo[1]) * (j + 0.5) / k : 0.0};
                if (region.contains(c)) out.push_back(Ball{c, std::min(r, 0.5), d});
            }
        }
    }
    for (const auto& f : phi.focus_points()) {
        if (!region.contains(f)) continue;
        for (double r : {0.25, 1e-2, 1e-4, 1e-8, 1e-16, 1e-32, 1e-64, 1e-128, 1e-200, 1e-256})
            out.push_back(Ball{f, r, d});
    }
    return out;
}

inline PropertyReport check_local_comparability(const PhiFunction& phi, const Point& x0, double theta,
                                          const CheckConfig& cfg = {}, double c_bound = 2.0) {
    PropertyReport rep;
    rep.property = "cmp";
    PropertyReport a0 = check_A0(phi, cfg);
    if (!a0.holds) throw PreconditionError("local comparability: (A0) does not hold");
    const double sigma = a0.constants.at("sigma");
    if (!(theta > sigma)) throw ArgumentError("local comparability: theta must exceed sigma");
    if (!phi.domain().contains(x0)) throw DomainError("local comparability: x0 outside the domain");
    auto ts = log_grid(sigma, theta, cfg.interval_t_samples);
    rep.sampling = detail::sampling_info(cfg, 0, cfg.interval_t_samples, sigma, theta);
    const double eps_start = 0.25 * std::min(1.0, phi.domain().scale());
    std::vector<double> Cs, eps;
    std::vector<Witness> ws;
    for (int k = 0; k < cfg.shrink_steps; ++k) {
        double e = eps_start * std::ldexp(1.0, -k);
        Ball B{x0, e, phi.dim()};
        BallBounds bb(phi, B);
        double C = 0.0;
        Witness w{x0, ts.front(), B, 0.0, "phi+/phi- ratio"};
        for (double t : ts) {
            double lo = bb.lower(t), hi = bb.upper(t);
            double ratio = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
            if (!(ratio <= C)) {
                C = ratio;
                w.t = t;
                w.value = ratio;
            }
        }
        Cs.push_back(C);
        eps.push_back(e);
        ws.push_back(w);
    }
    const size_t n = Cs.size();
    // Largest tail on which C is finite, bounded by c_bound and non-increasing as eps shrinks.
    size_t start = n;
    while (start > 0) {
        size_t k = start - 1;
        bool ok = std::isfinite(Cs[k]) && Cs[k] <= c_bound * (1.0 + 1e-12);
        if (ok && start < n) ok = Cs[start] <= Cs[k] * (1.0 + 1e-9);
        if (!ok) break;
        start = k;
    }
    if (start > n / 2) {
        Witness w = ws.back();
        w.detail = "phi+/phi- ratio does not settle below " + format_number(c_bound) + " as the ball shrinks";
        rep.fail(w);
        return rep;
    }
    rep.holds = true;
    rep.constants["C"] = Cs.back();
    rep.constants["eps0"] = eps[start];
    rep.constants["sigma"] = sigma;
    rep.constants["theta"] = theta;
    return rep;
}

inline PropertyReport check_equivalence(const PhiFunction& phi, const PhiFunction& psi, const CheckConfig& cfg = {}) {
    if (!phi.domain().same_as(psi.domain())) throw ArgumentError("check_equivalence: domains differ");
    PropertyReport rep;
    rep.property = "equivalence";
    auto ts = log_grid(cfg.t_min, cfg.t_max, cfg.t_samples);
    auto xs = detail::sample_points(phi, cfg);
    if (phi.is_x_independent() && !psi.is_x_independent()) xs = detail::sample_points(psi, cfg);
    rep.sampling = detail::sampling_info(cfg, xs.size(), cfg.t_samples, cfg.t_min, cfg.t_max);
    std::vector<double> psiv(xs.size() * ts.size());
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t k = 0; k < ts.size(); ++k) psiv[i * ts.size() + k] = psi(xs[i], ts[k]);
    // Sandwich on the t-index range [k0, k1).
    auto passes = [&](double L, size_t k0, size_t k1, Witness* w) {
        // Descending t, so a witness sits at the largest failing t.
        for (size_t i = 0; i < xs.size(); ++i) {
            for (size_t k = k1; k-- > k0;) {
                double v = psiv[i * ts.size() + k];
                double below = phi(xs[i], ts[k] / L), above = phi(xs[i], ts[k] * L);
                if (!(below <= v * (1.0 + 1e-12) && v <= above * (1.0 + 1e-12))) {
                    if (w) *w = {xs[i], ts[k], std::nullopt, v, "sandwich phi(t/L) <= psi(t) <= phi(Lt) fails"};
                    return false;
                }
            }
        }
        return true;
    };
    auto grid = log_grid(1.0, cfg.L_max, cfg.search_points);
    auto fit = [&](size_t k0, size_t k1) -> std::optional<double> {
        size_t lo = 0, hi = grid.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (passes(grid[mid], k0, k1, nullptr)) hi = mid;
            else lo = mid + 1;
        }
        if (lo == grid.size()) return std::nullopt;
        double L = grid[lo];
        if (lo > 0) {
            double a = grid[lo - 1], b = grid[lo];
            for (int it = 0; it < 200 && b - a > 1e-10 * b; ++it) {
                double m = 0.5 * (a + b);
                if (passes(m, k0, k1, nullptr)) b = m;
                else a = m;
            }
            L = b;
        }
        return L;
    };
    size_t i0, i1;
    detail::inner_range(ts.size(), i0, i1);
    auto L_full = fit(0, ts.size());
    auto L_inner = fit(i0, i1);
    // An L that must grow with the sampled t-range signals an unbounded ratio.
    if (!L_full || !L_inner || *L_full > *L_inner * (1.0 + cfg.equivalence_growth_tol)) {
        Witness w;
        passes(L_inner ? *L_inner : cfg.L_max, 0, ts.size(), &w);
        w.detail += " (L grows with the t-range)";
        rep.fail(w);
        return rep;
    }
    const double L = *L_full;
    rep.holds = true;
    rep.constants["L"] = L;
    return rep;
}

// Phi-prefunction axioms on samples: phi(x,0)=0, monotone in t, coercive,
// nonnegative coefficients.
inline PropertyReport check_prefunction(const PhiFunction& phi, const CheckConfig& cfg = {}) {
    PropertyReport rep;
    rep.property = "prefunction";
    auto ts = log_grid(cfg.t_min, cfg.t_max, cfg.t_samples);
    auto xs = detail::sample_points(phi, cfg);
    rep.sampling = detail::sampling_info(cfg, xs.size(), cfg.t_samples, cfg.t_min, cfg.t_max);
    for (const auto& x : xs) {
        if (phi(x, 0.0) != 0.0) {
            rep.fail({x, 0.0, std::nullopt, phi(x, 0.0), "phi(x,0) != 0"});
            return rep;
        }
        for (const SpatialField* f : {&phi.a(), &phi.b()}) {
            double v = (*f)(x);
            if (!(v >= 0.0)) {
                rep.fail({x, 0.0, std::nullopt, v, "negative coefficient"});
                return rep;
            }
        }
        double prev = 0.0;
        for (double t : ts) {
            double v = phi(x, t);
            if (!(v >= prev * (1.0 - 1e-12))) {
                rep.fail({x, t, std::nullopt, v, "not nondecreasing in t"});
                return rep;
            }
            prev = v;
        }
        if (!(phi(x, 1e8) > phi(x, 1.0) && phi(x, 1e8) >= 1.0)) {
            rep.fail({x, 1e8, std::nullopt, phi(x, 1e8), "no growth at large t"});
            return rep;
        }
    }
    rep.holds = true;
    return rep;
}

}  // namespace olab
