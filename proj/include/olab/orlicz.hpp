#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/grid.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"

namespace olab {

inline constexpr double kTolNorm = 1e-8;

namespace detail {

inline void require_compatible(const PhiFunction& phi, const GridFunction& f) {
    if (phi.dim() != f.dim()) throw ArgumentError("grid function and phi have different dimensions");
    const Domain& D = phi.domain();
    for (size_t c = 0; c < f.cells(); ++c)
        if (f.active(c) && !D.contains(f.center(c)))
            throw ArgumentError("grid function is not defined on the domain of phi");
}

inline double modular_scaled(const PhiFunction& phi, const GridFunction& f, double inv_lambda) {
    double s = 0.0;
    if (phi.is_x_independent()) {
        Point a = phi.anchor();
        for (size_t c = 0; c < f.cells(); ++c)
            if (f.active(c)) s += phi(a, f.magnitude(c) * inv_lambda);
    } else {
        for (size_t c = 0; c < f.cells(); ++c)
            if (f.active(c)) s += phi(f.center(c), f.magnitude(c) * inv_lambda);
    }
    return s * f.cell_measure();
}

}  // namespace detail

inline double modular(const PhiFunction& phi, const GridFunction& f) {
    detail::require_compatible(phi, f);
    return detail::modular_scaled(phi, f, 1.0);
}

inline double luxemburg_norm(const PhiFunction& phi, const GridFunction& f) {
    detail::require_compatible(phi, f);
    const double fmax = f.max_magnitude();
    if (fmax == 0.0) return 0.0;
    double lo = 1e-12 * fmax, hi = 1e12 * fmax;
    auto ok = [&](double lam) { return detail::modular_scaled(phi, f, 1.0 / lam) <= 1.0; };
    for (int it = 0; it < 200 && hi / lo - 1.0 > kTolNorm * 1e-2; ++it) {
        double mid = std::sqrt(lo * hi);
        if (ok(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

inline double lp_norm(const GridFunction& f, double p) {
    double s = 0.0;
    for (size_t c = 0; c < f.cells(); ++c)
        if (f.active(c)) s += std::pow(f.magnitude(c), p);
    return std::pow(s * f.cell_measure(), 1.0 / p);
}

inline PropertyReport unit_ball_check(const PhiFunction& phi, const std::vector<GridFunction>& corpus,
                                      double slack = 1e-6) {
    PropertyReport rep;
    rep.property = "unit_ball";
    rep.sampling.x_samples = static_cast<int>(corpus.size());
    double worst = 0.0;
    for (size_t i = 0; i < corpus.size(); ++i) {
        const double n = luxemburg_norm(phi, corpus[i]);
        const double rho = modular(phi, corpus[i]);
        std::string bad;
        double excess = 0.0;
        if (n < 1.0 && rho > n * (1.0 + slack)) {
            bad = "norm < 1 but modular > norm";
            excess = rho - n;
        } else if (n > 1.0 && n > rho * (1.0 + slack)) {
            bad = "norm > 1 but norm > modular";
            excess = n - rho;
        } else if (n > (rho + 1.0) * (1.0 + slack)) {
            bad = "norm > modular + 1";
            excess = n - rho - 1.0;
        }
        if (!bad.empty()) {
            rep.fail({{0.0, 0.0}, n, std::nullopt, excess, bad + " (case " + std::to_string(i) + ")"});
            return rep;
        }
        worst = std::max(worst, n / (rho + 1.0));
    }
    rep.holds = true;
    rep.constants["max_norm_over_modular_plus_one"] = worst;
    return rep;
}

inline constexpr double kMaximalRadiusRatio = 1.0905077326652577;  // 2^{1/8}

// Restricted maximal operator: sup over a geometric radius grid of the integral
// of |f| over B_r(x) intersected with the domain, divided by the full ball
// measure. Balls are rasterized by cell-center membership, and the full-ball
// measure is the rasterized measure of the ball in the infinite lattice.
inline GridFunction maximal_operator(const GridFunction& f) {
    const int nx = f.nx(), ny = f.ny();
    const double hx = f.h(0), hy = f.dim() > 1 ? f.h(1) : 0.0;
    const double h = f.dim() > 1 ? std::min(hx, hy) : hx;
    const double diam = f.domain().diameter();
    std::vector<double> radii{h};
    while (radii.back() < diam) radii.push_back(radii.back() * kMaximalRadiusRatio);
    const int K = static_cast<int>(radii.size());
    const double log_ratio = std::log(kMaximalRadiusRatio);

    auto bin_of = [&](double dist) -> int {
        if (dist <= h * (1.0 + 1e-12)) return 0;
        int k = static_cast<int>(std::ceil(std::log(dist / h) / log_ratio - 1e-9));
        while (k > 0 && dist <= radii[k - 1] * (1.0 + 1e-12)) --k;
        while (k < K && dist > radii[k] * (1.0 + 1e-12)) ++k;
        return k;
    };

    // Bin lookup for every offset in the grid.
    const int W = 2 * nx - 1, H = 2 * ny - 1;
    std::vector<int> table(static_cast<size_t>(W) * H);
    for (int dj = -(ny - 1); dj <= ny - 1; ++dj)
        for (int di = -(nx - 1); di <= nx - 1; ++di)
            table[static_cast<size_t>(dj + ny - 1) * W + (di + nx - 1)] = bin_of(std::hypot(di * hx, dj * hy));

    // Lattice-point counts of the full balls.
    std::vector<double> full(static_cast<size_t>(K) + 1, 0.0);
    {
        const int Rx = static_cast<int>(std::ceil(radii.back() / hx)) + 1;
        const int Ry = f.dim() > 1 ? static_cast<int>(std::ceil(radii.back() / hy)) + 1 : 0;
        for (int dj = -Ry; dj <= Ry; ++dj)
            for (int di = -Rx; di <= Rx; ++di) {
                int k = bin_of(std::hypot(di * hx, dj * hy));
                if (k < K) full[k] += 1.0;
            }
        for (int k = 1; k < K; ++k) full[k] += full[k - 1];
    }

    std::vector<double> absf(f.cells(), 0.0);
    std::vector<size_t> act;
    for (size_t c = 0; c < f.cells(); ++c)
        if (f.active(c)) {
            absf[c] = f.magnitude(c);
            act.push_back(c);
        }

    GridFunction out(f.domain(), f.shape(), 1);
    std::vector<double> bins(static_cast<size_t>(K) + 1);
    for (size_t c : act) {
        std::fill(bins.begin(), bins.end(), 0.0);
        const int ci = f.ix(c), cj = f.iy(c);
        for (int j = 0; j < ny; ++j) {
            const int* row = &table[static_cast<size_t>(j - cj + ny - 1) * W + (nx - 1 - ci)];
            const double* vals = &absf[static_cast<size_t>(j) * nx];
            for (int i = 0; i < nx; ++i) bins[row[i]] += vals[i];
        }
        double acc = 0.0, best = 0.0;
        for (int k = 0; k < K; ++k) {
            acc += bins[k];
            best = std::max(best, acc / full[k]);
        }
        out.at(c) = best;
    }
    return out;
}

struct MaximalBoundConfig {
    double c1 = 0.0;
    double gamma = 0.0;
    double q = 0.0;
};

inline PropertyReport verify_maximal_bound(const PhiFunction& phi, const std::vector<GridFunction>& corpus,
                                           const MaximalBoundConfig& mc, const CheckConfig& cfg = {}) {
    if (!phi.is_x_independent())
        throw PreconditionError("maximal bound: phi must not depend on x");
    if (!(mc.gamma > 1.0)) throw PreconditionError("maximal bound: gamma must exceed 1", mc.gamma, 1.0);
    if (!(mc.c1 > 0.0)) throw ArgumentError("maximal bound: c1 must be positive");
    if (!check_inc(phi, mc.gamma, false, cfg).holds)
        throw PreconditionError("maximal bound: (Inc)_gamma does not hold");
    if (!check_dec(phi, mc.q, false, cfg).holds) throw PreconditionError("maximal bound: (Dec)_q does not hold");

    const double inv1 = left_inverse(phi, phi.anchor(), 1.0);
    const double c = inv1 * inv1 * inv1 / (16.0 * mc.c1);
    const double C = std::max(std::pow(2.0, mc.q) * std::pow(c, -mc.q), 2.0);

    PropertyReport rep;
    rep.property = "maximal_bound";
    rep.sampling.x_samples = static_cast<int>(corpus.size());
    double worst_ratio = 0.0, worst_scaled = 0.0;
    for (size_t i = 0; i < corpus.size(); ++i) {
        const GridFunction& f = corpus[i];
        GridFunction Mf = maximal_operator(f);
        const double rho_f = modular(phi, f);
        const double rho_M = modular(phi, Mf);
        const double bound = C * std::pow(rho_f + 1.0, mc.q);
        if (!(rho_M <= bound)) {
            rep.fail({{0.0, 0.0}, 0.0, std::nullopt, rho_M / bound,
                      "modular of Mf exceeds C(modular(f)+1)^q (case " + std::to_string(i) + ")"});
            return rep;
        }
        worst_ratio = std::max(worst_ratio, rho_M / bound);
        const double nf = luxemburg_norm(phi, f);
        if (nf > 0.0) {
            const double eps = 1.0 / (2.0 * nf);
            const double lhs = modular(phi, Mf.scaled(c * eps));
            if (!(lhs <= 1.0)) {
                rep.fail({{0.0, 0.0}, 0.0, std::nullopt, lhs,
                          "modular of c*eps*Mf exceeds 1 (case " + std::to_string(i) + ")"});
                return rep;
            }
            worst_scaled = std::max(worst_scaled, lhs);
        }
    }
    rep.holds = true;
    rep.constants["c"] = c;
    rep.constants["C"] = C;
    rep.constants["c1"] = mc.c1;
    rep.constants["max_bound_ratio"] = worst_ratio;
    rep.constants["max_scaled_modular"] = worst_scaled;
    return rep;
}

inline std::vector<double> lebesgue_point_defect(const PhiFunction& phi, const GridFunction& f, const Point& x0,
                                                 const std::vector<double>& radii) {
    detail::require_compatible(phi, f);
    for (size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0)) throw ArgumentError("lebesgue_point_defect: radii must be positive");
        if (k > 0 && !(radii[k] < radii[k - 1])) throw ArgumentError("lebesgue_point_defect: radii must decrease");
        if (!f.domain().contains_ball(Ball{x0, radii[k], f.dim()}))
            throw ArgumentError("lebesgue_point_defect: ball escapes the domain");
    }
    auto home = f.locate(x0);
    if (!home) throw ArgumentError("lebesgue_point_defect: x0 outside the grid");
    const size_t c0 = *home;
    auto diff = [&](size_t c) {
        double s = 0.0;
        for (int k = 0; k < f.components(); ++k) {
            double d = f.at(c, k) - f.at(c0, k);
            s += d * d;
        }
        return std::sqrt(s);
    };
    std::vector<double> out;
    for (double r : radii) {
        Ball B{x0, r, f.dim()};
        double s = 0.0;
        size_t n = 0;
        for (size_t c = 0; c < f.cells(); ++c) {
            if (!f.active(c) || !B.contains(f.center(c))) continue;
            s += phi(f.center(c), diff(c));
            ++n;
        }
        out.push_back(n ? s / static_cast<double>(n) : 0.0);
    }
    return out;
}

}  // namespace olab
