#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/grid.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"
#include "olab/random.hpp"
#include "olab/sbv.hpp"

namespace olab {

// xi holds m*d entries, component k and axis a at k*d + a.
using BulkFn = std::function<double(const Point& x, const std::vector<double>& xi)>;
using SurfaceFn = std::function<double(const Point& x, const std::vector<double>& zeta, const Point& nu)>;

inline double frobenius(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct BulkIntegrand {
    BulkFn eval;
    PhiFunction growth_phi;
    double a = 1.0;
    double b = 1.0;
    std::string name = "bulk";
    bool x_independent = true;

    double operator()(const Point& x, const std::vector<double>& xi) const { return eval(x, xi); }

    // f(xi) = |xi|^2.
    static BulkIntegrand quadratic(const Domain& D) {
        return {[](const Point&, const std::vector<double>& xi) {
                    double n = frobenius(xi);
                    return n * n;
                },
                PhiFunction::power(D, 2.0), 1.0, 1.0, "quadratic", true};
    }
    // f(xi) = (|xi|^2 - 1)^2 with t^4 growth.
    static BulkIntegrand double_well(const Domain& D, double a = 0.25, double b = 2.0) {
        return {[](const Point&, const std::vector<double>& xi) {
                    double n = frobenius(xi);
                    return (n * n - 1.0) * (n * n - 1.0);
                },
                PhiFunction::power(D, 4.0), a, b, "double-well", true};
    }
    // f(x, xi) = scale * phi(x, |xi|) + shift.
    static BulkIntegrand from_phi(const PhiFunction& phi, double scale = 1.0, double shift = 0.0, double a = 1.0,
                                  double b = 1.0) {
        return {[phi, scale, shift](const Point& x, const std::vector<double>& xi) {
                    return scale * phi(x, frobenius(xi)) + shift;
                },
                phi, a, b, "phi", phi.is_x_independent()};
    }
};

struct SurfaceIntegrand {
    SurfaceFn eval;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    std::string name = "surface";
    double monotone_c = 0.0;  // 0 when no monotonicity is declared

    double operator()(const Point& x, const std::vector<double>& zeta, const Point& nu) const {
        return eval(x, zeta, nu);
    }

    static SurfaceIntegrand constant(double alpha) {
        return {[alpha](const Point&, const std::vector<double>&, const Point&) { return alpha; }, alpha, alpha,
                "constant", 0.0};
    }
    // min(|zeta|, cap) + base.
    static SurfaceIntegrand capped(double cap, double base) {
        return {[cap, base](const Point&, const std::vector<double>& z, const Point&) {
                    return std::min(frobenius(z), cap) + base;
                },
                base, base + cap, "capped", 1.0};
    }
};

struct Functional {
    BulkIntegrand bulk;
    SurfaceIntegrand surface;
    Domain domain;
};

struct EnergyParts {
    double bulk = 0.0;
    double surface = 0.0;
    double total() const { return bulk + surface; }
};

inline std::vector<double> cell_gradient(const SbvFunction& u, size_t c) {
    const int n = u.components() * u.dim();
    std::vector<double> xi(n);
    for (int k = 0; k < n; ++k) xi[k] = u.gradient().at(c, k);
    return xi;
}

// Bulk by cell quadrature over cells with center in A, surface by facet sum
// over facets with midpoint in A.
inline EnergyParts energy_parts(const Functional& F, const SbvFunction& u, const Domain& A) {
    const GridFunction& g = u.base();
    EnergyParts e;
    const double w = g.cell_measure();
    for (size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c) || !A.contains(g.center(c))) continue;
        e.bulk += F.bulk(g.center(c), cell_gradient(u, c)) * w;
    }
    for (const auto& f : u.jumps().facets()) {
        bool nonzero = false;
        for (double a : f.amp) nonzero = nonzero || a != 0.0;
        if (!nonzero) throw InvariantError("evaluate_functional: zero-amplitude facet");
        Point mid = JumpSet::facet_midpoint(g, f);
        if (!A.contains(mid)) continue;
        e.surface += F.surface(mid, f.amp, JumpSet::facet_normal(f)) * JumpSet::facet_measure(g, f);
    }
    return e;
}

inline double evaluate_functional(const Functional& F, const SbvFunction& u, const Domain& A) {
    return energy_parts(F, u, A).total();
}

inline double evaluate_functional(const Functional& F, const SbvFunction& u) {
    return evaluate_functional(F, u, u.base().domain());
}

// A_{eps,x0} = x0 + eps (A - x0).
inline Domain rescale_set(const Domain& A, double eps, const Point& x0) {
    if (!(eps > 0.0)) throw ArgumentError("rescale_set: eps must be positive");
    auto map = [&](const Point& p) {
        return Point{x0[0] + eps * (p[0] - x0[0]), A.dim > 1 ? x0[1] + eps * (p[1] - x0[1]) : 0.0};
    };
    Domain out = A.kind == DomainKind::Ball ? Domain::ball(A.dim, map(A.center), eps * A.radius)
                                            : Domain::box(A.dim, map(A.lo), map(A.hi));
    double expect = A.measure() * std::pow(eps, A.dim);
    if (std::abs(out.measure() - expect) > 1e-12 * std::max(1.0, expect))
        throw InvariantError("rescale_set: measure did not scale by eps^d");
    return out;
}

struct GrowthConfig {
    double xi_min = 1e-3;
    double xi_max = 1e2;
    int functional_samples = 16;
};

// Samples a phi(x,|xi|) <= f(x,xi) <= b (1 + phi(x,|xi|)) and an energy
// sandwich for affine-plus-step functions on random balls.
inline PropertyReport check_growth(const Functional& F, int samples, std::uint64_t seed,
                                   const GrowthConfig& gc = {}) {
    PropertyReport rep;
    rep.property = "growth";
    const Domain& D = F.domain;
    const int d = D.dim, m = 1;
    Rng rng(seed);
    auto random_point = [&]() {
        Point x;
        do {
            x = {rng.uniform(D.lo[0], D.hi[0]), d > 1 ? rng.uniform(D.lo[1], D.hi[1]) : 0.0};
        } while (!D.contains(x));
        return x;
    };
    auto random_xi = [&]() {
        std::vector<double> xi(m * d);
        double r = std::exp(rng.uniform(std::log(gc.xi_min), std::log(gc.xi_max)));
        double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
        xi[0] = d > 1 ? r * std::cos(ang) : (rng.coin() ? r : -r);
        if (d > 1) xi[1] = r * std::sin(ang);
        return xi;
    };
    rep.sampling.seed = seed;
    rep.sampling.x_samples = samples;
    rep.sampling.t_min = gc.xi_min;
    rep.sampling.t_max = gc.xi_max;
    double lo_ratio = std::numeric_limits<double>::infinity(), hi_ratio = 0.0;
    for (int s = 0; s < samples; ++s) {
        Point x = random_point();
        auto xi = random_xi();
        double phi = F.bulk.growth_phi(x, frobenius(xi));
        double f = F.bulk(x, xi);
        if (phi > 0.0) lo_ratio = std::min(lo_ratio, f / phi);
        hi_ratio = std::max(hi_ratio, f / (1.0 + phi));
        if (!(F.bulk.a * phi <= f * (1.0 + 1e-12))) {
            rep.fail({x, frobenius(xi), std::nullopt, f, "lower growth bound a*phi <= f fails"});
            return rep;
        }
        if (!(f <= F.bulk.b * (1.0 + phi) * (1.0 + 1e-12))) {
            rep.fail({x, frobenius(xi), std::nullopt, f, "upper growth bound f <= b(1+phi) fails"});
            return rep;
        }
    }
    // Energy sandwich on u = xi.(x - c) + step with one straight facet line.
    const double lo_c = std::min(F.bulk.a, F.surface.alpha1), hi_c = std::max(F.bulk.b, F.surface.alpha2);
    for (int s = 0; s < gc.functional_samples; ++s) {
        Point c = random_point();
        double rmax = D.radius - distance(c, D.center, d);
        if (D.kind == DomainKind::Box) {
            rmax = std::numeric_limits<double>::infinity();
            for (int k = 0; k < d; ++k) rmax = std::min(rmax, std::min(c[k] - D.lo[k], D.hi[k] - c[k]));
        }
        if (!(rmax > 1e-3)) continue;
        double r = rng.uniform(0.3, 1.0) * rmax;
        Domain Bd = Domain::ball(d, c, r);
        auto xi = random_xi();
        double jump = rng.uniform(0.5, 2.0);
        const int n = 32;
        GridFunction g = GridFunction::sample(Bd, n, [&](const Point& x) {
            double v = xi[0] * (x[0] - c[0]) + (d > 1 ? xi[1] * (x[1] - c[1]) : 0.0);
            return v + (x[0] > c[0] ? jump : 0.0);
        });
        std::vector<std::pair<size_t, int>> cand;
        for (size_t cell = 0; cell < g.cells(); ++cell) {
            int i = g.ix(cell);
            if (i + 1 < g.nx() && g.active(cell) && g.active(g.index(i + 1, g.iy(cell))) &&
                g.center(cell)[0] < c[0] && g.center(g.index(i + 1, g.iy(cell)))[0] > c[0])
                cand.push_back({cell, 0});
        }
        JumpSet J;
        for (auto [cell, axis] : cand) J.add(JumpFacet{g.ix(cell), g.iy(cell), axis, 1, {jump}, 1.0});
        SbvFunction u = SbvFunction::build(std::move(g), std::move(J));
        auto e = energy_parts(F, u, Bd);
        double phi_int = 0.0, H = u.jumps().total_measure(u.base());
        const GridFunction& gb = u.base();
        for (size_t cell = 0; cell < gb.cells(); ++cell)
            if (gb.active(cell)) phi_int += F.bulk.growth_phi(gb.center(cell), u.gradient_norm(cell)) * gb.cell_measure();
        double meas = gb.active_measure();
        double G = e.total();
        if (!(lo_c * (phi_int + H) <= G * (1.0 + 1e-9))) {
            rep.fail({c, frobenius(xi), Ball{c, r, d}, G, "energy lower bound a(int phi + H(J)) <= G fails"});
            return rep;
        }
        if (!(G <= hi_c * (meas + phi_int + H) * (1.0 + 1e-9))) {
            rep.fail({c, frobenius(xi), Ball{c, r, d}, G, "energy upper bound G <= b(int (1+phi) + H(J)) fails"});
            return rep;
        }
    }
    rep.holds = true;
    rep.constants["a"] = F.bulk.a;
    rep.constants["b"] = F.bulk.b;
    rep.constants["min_f_over_phi"] = lo_ratio;
    rep.constants["max_f_over_1_plus_phi"] = hi_ratio;
    return rep;
}

// Greatest convex minorant of samples (xs ascending), evaluated at xs.
inline std::vector<double> convex_envelope_scalar(const std::vector<double>& xs, const std::vector<double>& fs) {
    if (xs.size() != fs.size() || xs.empty()) throw ArgumentError("convex_envelope_scalar: bad profile");
    for (size_t k = 1; k < xs.size(); ++k)
        if (!(xs[k] > xs[k - 1])) throw ArgumentError("convex_envelope_scalar: grid must be increasing");
    for (double f : fs)
        if (!std::isfinite(f)) throw ArgumentError("convex_envelope_scalar: profile must be finite");
    std::vector<size_t> hull;
    auto cross = [&](size_t o, size_t a, size_t b) {
        return (xs[a] - xs[o]) * (fs[b] - fs[o]) - (fs[a] - fs[o]) * (xs[b] - xs[o]);
    };
    for (size_t k = 0; k < xs.size(); ++k) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), k) <= 0.0) hull.pop_back();
        hull.push_back(k);
    }
    std::vector<double> out(xs.size());
    size_t seg = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        while (seg + 1 < hull.size() && xs[hull[seg + 1]] < xs[k]) ++seg;
        if (seg + 1 >= hull.size()) {
            out[k] = fs[hull.back()];
            continue;
        }
        size_t a = hull[seg], b = hull[seg + 1];
        double lam = (xs[k] - xs[a]) / (xs[b] - xs[a]);
        out[k] = std::min(fs[k], (1.0 - lam) * fs[a] + lam * fs[b]);
    }
    return out;
}

struct SubadditiveResult {
    std::vector<double> values;
    int iterations = 0;
    bool converged = false;
};

// zetas: uniform grid k*dz, k = -N..N with zeta = 0 excluded or ignored.
// Iterates h(z) <- min(h(z), h(z1) + h(z - z1)) over grid splits.
inline SubadditiveResult subadditive_envelope_1d(const std::vector<double>& zetas, const std::vector<double>& g,
                                                 int max_iterations = 64) {
    if (zetas.size() != g.size() || zetas.size() < 2) throw ArgumentError("subadditive_envelope_1d: bad profile");
    const double dz = zetas[1] - zetas[0];
    for (size_t k = 1; k < zetas.size(); ++k)
        if (std::abs(zetas[k] - zetas[k - 1] - dz) > 1e-9 * std::abs(dz))
            throw ArgumentError("subadditive_envelope_1d: grid must be uniform");
    auto index_of = [&](double z) -> long {
        double pos = (z - zetas[0]) / dz;
        long k = std::lround(pos);
        if (k < 0 || k >= static_cast<long>(zetas.size()) || std::abs(pos - k) > 1e-6) return -1;
        return k;
    };
    SubadditiveResult r;
    r.values = g;
    const size_t n = zetas.size();
    for (r.iterations = 0; r.iterations < max_iterations;) {
        ++r.iterations;
        bool changed = false;
        for (size_t k = 0; k < n; ++k) {
            if (std::abs(zetas[k]) < 0.5 * std::abs(dz)) continue;
            for (size_t j = 0; j < n; ++j) {
                if (std::abs(zetas[j]) < 0.5 * std::abs(dz)) continue;
                long other = index_of(zetas[k] - zetas[j]);
                if (other < 0 || std::abs(zetas[other]) < 0.5 * std::abs(dz)) continue;
                double cand = r.values[j] + r.values[other];
                if (cand < r.values[k] - 1e-15 * std::abs(r.values[k])) {
                    r.values[k] = cand;
                    changed = true;
                }
            }
        }
        if (!changed) {
            r.converged = true;
            break;
        }
    }
    return r;
}

}  // namespace olab
