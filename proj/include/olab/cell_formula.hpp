#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/functionals.hpp"
#include "olab/geometry.hpp"
#include "olab/grid.hpp"
#include "olab/random.hpp"
#include "olab/sbv.hpp"

namespace olab {

enum class DatumKind { Affine, Step };

struct BoundaryDatum {
    DatumKind kind = DatumKind::Affine;
    Point x0{0.0, 0.0};
    std::vector<double> u0;  // Affine: value at x0
    std::vector<double> xi;  // Affine: m*d gradient
    std::vector<double> a;   // Step: value where (x - x0).nu > 0
    std::vector<double> b;   // Step: value elsewhere
    Point nu{1.0, 0.0};
    int dim = 2;

    static BoundaryDatum affine(int d, Point x0, std::vector<double> u0, std::vector<double> xi) {
        if (xi.size() != u0.size() * static_cast<size_t>(d)) throw ArgumentError("affine datum: xi must be m x d");
        BoundaryDatum D;
        D.kind = DatumKind::Affine;
        D.dim = d;
        D.x0 = x0;
        D.u0 = std::move(u0);
        D.xi = std::move(xi);
        return D;
    }
    static BoundaryDatum step(int d, Point x0, std::vector<double> a, std::vector<double> b, Point nu) {
        if (a.size() != b.size() || a.empty()) throw ArgumentError("step datum: a and b must have the same size");
        if (a == b) throw ArgumentError("step datum: a must differ from b");
        if (d == 1) nu[1] = 0.0;
        if (std::abs(std::hypot(nu[0], nu[1]) - 1.0) > 1e-9) throw ArgumentError("step datum: nu must be a unit vector");
        BoundaryDatum D;
        D.kind = DatumKind::Step;
        D.dim = d;
        D.x0 = x0;
        D.a = std::move(a);
        D.b = std::move(b);
        D.nu = nu;
        return D;
    }

    int components() const { return static_cast<int>(kind == DatumKind::Affine ? u0.size() : a.size()); }
    double side(const Point& x) const { return (x[0] - x0[0]) * nu[0] + (dim > 1 ? (x[1] - x0[1]) * nu[1] : 0.0); }
    std::vector<double> value(const Point& x) const {
        if (kind == DatumKind::Step) return side(x) > 0.0 ? a : b;
        std::vector<double> v = u0;
        for (size_t k = 0; k < v.size(); ++k)
            for (int j = 0; j < dim; ++j) v[k] += xi[k * dim + j] * (x[j] - x0[j]);
        return v;
    }
    BoundaryDatum recentered(const Point& c) const {
        BoundaryDatum D = *this;
        if (kind == DatumKind::Affine) D.u0 = value(c);
        D.x0 = c;
        return D;
    }
};

struct CellSearchConfig {
    int mesh = 64;            // cells across the diameter of A
    int max_iterations = 400; // per descent run
    double descent_rtol = 1e-12;
    int min_period_cells = 4;
    double collar_cells = 2.0;
    bool polish = true;
};

struct CellMinimum {
    double value = 0.0;
    double datum_energy = 0.0;
    double measure = 0.0;  // discrete |A|
    SbvFunction minimizer;
    std::string family;
    bool budget_exhausted = false;
};

namespace detail {

// Discrete energy of cell values with a frozen jump-facet set.
class CellEnergy {
public:
    struct Facet {
        size_t lo, hi;  // amplitude = v[hi] - v[lo]
        double measure;
        Point mid, nu;
    };

    CellEnergy(const Functional& F, const GridFunction& g, const JumpSet& J) : F_(F), g_(g), stencil_(g, J) {
        for (const auto& f : J.facets()) {
            size_t a = g.index(f.i, f.j);
            size_t b = f.axis == 0 ? g.index(f.i + 1, f.j) : g.index(f.i, f.j + 1);
            Facet fc{a, b, JumpSet::facet_measure(g, f), JumpSet::facet_midpoint(g, f), JumpSet::facet_normal(f)};
            if (f.nu_sign < 0) std::swap(fc.lo, fc.hi), fc.nu = {-fc.nu[0], -fc.nu[1]};
            facets_.push_back(fc);
        }
    }

    double operator()(const std::vector<double>& v) const {
        const int m = g_.components(), d = g_.dim();
        double E = 0.0;
        std::vector<double> xi(m * d), zeta(m);
        for (size_t c = 0; c < g_.cells(); ++c) {
            if (!g_.active(c)) continue;
            for (int k = 0; k < m; ++k)
                for (int a = 0; a < d; ++a) xi[k * d + a] = stencil_.apply(v, c, a, m, k);
            E += F_.bulk(g_.center(c), xi) * g_.cell_measure();
        }
        for (const auto& f : facets_) {
            bool nonzero = false;
            for (int k = 0; k < m; ++k) {
                zeta[k] = v[f.hi * m + k] - v[f.lo * m + k];
                nonzero = nonzero || zeta[k] != 0.0;
            }
            if (nonzero) E += F_.surface(f.mid, zeta, f.nu) * f.measure;
        }
        return E;
    }

    // Gradient with respect to the cell values; bulk and surface derivatives by central differences.
    std::vector<double> gradient(const std::vector<double>& v) const {
        const int m = g_.components(), d = g_.dim();
        std::vector<double> G(v.size(), 0.0), xi(m * d), zeta(m);
        for (size_t c = 0; c < g_.cells(); ++c) {
            if (!g_.active(c)) continue;
            for (int k = 0; k < m; ++k)
                for (int a = 0; a < d; ++a) xi[k * d + a] = stencil_.apply(v, c, a, m, k);
            const Point x = g_.center(c);
            for (int k = 0; k < m; ++k)
                for (int a = 0; a < d; ++a) {
                    const auto& e = stencil_.entry(c, a);
                    if (e.plus == e.minus) continue;
                    int j = k * d + a;
                    double s = 1e-6 * std::max(1.0, std::abs(xi[j]));
                    double keep = xi[j];
                    xi[j] = keep + s;
                    double fp = F_.bulk(x, xi);
                    xi[j] = keep - s;
                    double fm = F_.bulk(x, xi);
                    xi[j] = keep;
                    double df = (fp - fm) / (2.0 * s) * g_.cell_measure() * e.inv;
                    G[e.plus * m + k] += df;
                    G[e.minus * m + k] -= df;
                }
        }
        for (const auto& f : facets_) {
            for (int k = 0; k < m; ++k) zeta[k] = v[f.hi * m + k] - v[f.lo * m + k];
            for (int k = 0; k < m; ++k) {
                double s = 1e-6 * std::max(1.0, std::abs(zeta[k]));
                double keep = zeta[k];
                zeta[k] = keep + s;
                double gp = F_.surface(f.mid, zeta, f.nu);
                zeta[k] = keep - s;
                double gm = F_.surface(f.mid, zeta, f.nu);
                zeta[k] = keep;
                double dg = (gp - gm) / (2.0 * s) * f.measure;
                G[f.hi * m + k] += dg;
                G[f.lo * m + k] -= dg;
            }
        }
        return G;
    }

private:
    const Functional& F_;
    const GridFunction& g_;
    GradientStencil stencil_;
    std::vector<Facet> facets_;
};

// Polak-Ribiere conjugate gradient with Armijo backtracking over free cells.
// Returns true when the relative decrease criterion is met before the budget.
inline bool descend(const CellEnergy& E, std::vector<double>& v, const std::vector<char>& free_value, int max_it,
                    double rtol) {
    double e = E(v);
    std::vector<double> g = E.gradient(v), dir(v.size(), 0.0), g_old;
    for (size_t k = 0; k < v.size(); ++k)
        if (!free_value[k]) g[k] = 0.0;
    for (size_t k = 0; k < v.size(); ++k) dir[k] = -g[k];
    double alpha = 1.0;
    for (int it = 0; it < max_it; ++it) {
        double slope = 0.0, gg = 0.0;
        for (size_t k = 0; k < v.size(); ++k) {
            slope += g[k] * dir[k];
            gg += g[k] * g[k];
        }
        if (gg == 0.0) return true;
        if (!(slope < 0.0)) {
            for (size_t k = 0; k < v.size(); ++k) dir[k] = -g[k];
            slope = -gg;
        }
        std::vector<double> trial(v.size());
        double et = e;
        bool accepted = false;
        alpha *= 4.0;
        for (int ls = 0; ls < 60; ++ls) {
            for (size_t k = 0; k < v.size(); ++k) trial[k] = v[k] + alpha * dir[k];
            et = E(trial);
            if (et <= e + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return true;
        double drop = e - et;
        v.swap(trial);
        e = et;
        if (drop <= rtol * std::max(std::abs(e), 1e-300)) return true;
        g_old = g;
        g = E.gradient(v);
        for (size_t k = 0; k < v.size(); ++k)
            if (!free_value[k]) g[k] = 0.0;
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k < v.size(); ++k) {
            num += g[k] * (g[k] - g_old[k]);
            den += g_old[k] * g_old[k];
        }
        double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
        for (size_t k = 0; k < v.size(); ++k) dir[k] = -g[k] + beta * dir[k];
    }
    return false;
}

// Lower convex hull of t -> f(t) on a grid; returns the hull vertices.
inline std::pair<std::vector<double>, std::vector<double>> lower_hull(const std::vector<double>& ts,
                                                                      const std::vector<double>& fs) {
    std::vector<size_t> h;
    for (size_t k = 0; k < ts.size(); ++k) {
        while (h.size() >= 2) {
            size_t o = h[h.size() - 2], a = h.back();
            double cr = (ts[a] - ts[o]) * (fs[k] - fs[o]) - (fs[a] - fs[o]) * (ts[k] - ts[o]);
            if (cr <= 0.0) h.pop_back();
            else break;
        }
        h.push_back(k);
    }
    std::vector<double> hx, hy;
    for (size_t k : h) {
        hx.push_back(ts[k]);
        hy.push_back(fs[k]);
    }
    return {hx, hy};
}

}  // namespace detail

// Upper bound for the cell minimum of F with datum prescribed on a two-cell collar of A.
inline CellMinimum cell_minimum(const Functional& F, const BoundaryDatum& datum, const Ball& A,
                                const CellSearchConfig& cfg = {}) {
    const int d = A.dim;
    if (d != 1 && d != 2) throw ArgumentError("cell_minimum: dimension must be 1 or 2");
    if (datum.dim != d) throw ArgumentError("cell_minimum: datum dimension differs from the ball");
    const int m = datum.components();
    const Domain Ad = Domain::ball(d, A.center, A.radius);
    GridFunction g(Ad, cfg.mesh, m);
    const double h = g.h(0);
    std::vector<char> fixed(g.cells(), 1), free_value(g.cells() * m, 0);
    for (size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c)) continue;
        auto val = datum.value(g.center(c));
        for (int k = 0; k < m; ++k) g.at(c, k) = val[k];
        double depth = A.radius - distance(g.center(c), A.center, d);
        if (depth >= cfg.collar_cells * h) {
            fixed[c] = 0;
            for (int k = 0; k < m; ++k) free_value[c * m + k] = 1;
        }
    }
    JumpSet Jd;
    if (datum.kind == DatumKind::Step) {
        const double weight = d > 1 ? 1.0 / (std::abs(datum.nu[0]) + std::abs(datum.nu[1])) : 1.0;
        for (size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            int i = g.ix(c), j = g.iy(c);
            for (int axis = 0; axis < d; ++axis) {
                int i2 = i + (axis == 0), j2 = j + (axis == 1);
                if (i2 >= g.nx() || j2 >= g.ny()) continue;
                size_t nb = g.index(i2, j2);
                if (!g.active(nb)) continue;
                bool s1 = datum.side(g.center(c)) > 0.0, s2 = datum.side(g.center(nb)) > 0.0;
                if (s1 == s2) continue;
                std::vector<double> amp(m);
                for (int k = 0; k < m; ++k) amp[k] = g.at(nb, k) - g.at(c, k);
                Jd.add(JumpFacet{i, j, axis, 1, amp, weight});
            }
        }
    }

    CellMinimum best;
    best.measure = g.active_measure();
    auto consider = [&](const GridFunction& vals, const JumpSet& J, const std::string& family) {
        JumpSet live;
        for (const auto& f : J.facets()) {
            size_t a = g.index(f.i, f.j);
            size_t b = f.axis == 0 ? g.index(f.i + 1, f.j) : g.index(f.i, f.j + 1);
            JumpFacet nf = f;
            bool nonzero = false;
            for (int k = 0; k < m; ++k) {
                nf.amp[k] = vals.at(b, k) - vals.at(a, k);
                nonzero = nonzero || nf.amp[k] != 0.0;
            }
            if (nonzero) live.add(std::move(nf));
        }
        SbvFunction u = SbvFunction::build(vals, std::move(live));
        double e = evaluate_functional(F, u, Ad);
        if (best.family.empty() || e < best.value) {
            best.value = e;
            best.minimizer = std::move(u);
            best.family = family;
        }
        return e;
    };
    auto descend_from = [&](const GridFunction& start, const JumpSet& J, const std::string& family) {
        detail::CellEnergy E(F, g, J);
        std::vector<double> v = start.values();
        bool ok = detail::descend(E, v, free_value, cfg.max_iterations, cfg.descent_rtol);
        GridFunction out = start;
        for (size_t k = 0; k < v.size(); ++k) out.values()[k] = v[k];
        consider(out, J, family);
        return ok;
    };

    best.datum_energy = consider(g, Jd, "datum");
    bool converged = descend_from(g, Jd, "descent");

    if (datum.kind == DatumKind::Step) {
        // Ramps of width delta across the interface; only collar facets stay jumps.
        JumpSet collar;
        for (const auto& f : Jd.facets()) {
            size_t a = g.index(f.i, f.j);
            size_t b = f.axis == 0 ? g.index(f.i + 1, f.j) : g.index(f.i, f.j + 1);
            if (fixed[a] && fixed[b]) collar.add(f);
        }
        for (double delta = 2.0 * h; delta <= 2.0 * A.radius * (1.0 + 1e-12); delta *= 2.0) {
            GridFunction r = g;
            for (size_t c = 0; c < g.cells(); ++c) {
                if (!g.active(c) || fixed[c]) continue;
                double lam = std::clamp(datum.side(g.center(c)) / delta + 0.5, 0.0, 1.0);
                for (int k = 0; k < m; ++k) r.at(c, k) = datum.b[k] + lam * (datum.a[k] - datum.b[k]);
            }
            consider(r, collar, "ramp");
        }
    }

    if (datum.kind == DatumKind::Affine && m == 1) {
        double xn = frobenius(datum.xi);
        Point e{1.0, 0.0};
        if (xn > 0.0) e = {datum.xi[0] / xn, d > 1 ? datum.xi[1] / xn : 0.0};
        const double T = 4.0 * std::max(1.0, xn);
        std::vector<double> ts, fs;
        const int nt = 4001;
        for (int k = 0; k < nt; ++k) {
            double t = -T + 2.0 * T * k / (nt - 1);
            std::vector<double> xi = datum.xi;
            for (int a = 0; a < d; ++a) xi[a] += t * e[a];
            ts.push_back(t);
            fs.push_back(F.bulk(A.center, xi));
        }
        auto [hx, hy] = detail::lower_hull(ts, fs);
        size_t seg = 0;
        while (seg + 1 < hx.size() && hx[seg + 1] <= 0.0) ++seg;
        if (seg + 1 < hx.size() && hx[seg] < 0.0 && hx[seg + 1] > 0.0) {
            const double t1 = hx[seg], t2 = hx[seg + 1];
            const double lam = t2 / (t2 - t1);
            double smin = std::numeric_limits<double>::infinity(), smax = -smin;
            for (size_t c = 0; c < g.cells(); ++c) {
                if (!g.active(c) || fixed[c]) continue;
                double s = (g.center(c)[0] - A.center[0]) * e[0] + (d > 1 ? (g.center(c)[1] - A.center[1]) * e[1] : 0.0);
                smin = std::min(smin, s);
                smax = std::max(smax, s);
            }
            if (smin < smax) {
                smin -= 0.5 * h;
                smax += 0.5 * h;
                const double L = smax - smin;
                GridFunction best_lam = g;
                double best_e = std::numeric_limits<double>::infinity();
                for (int k = 1; L / k >= cfg.min_period_cells * h; ++k) {
                    const double P = L / k;
                    GridFunction v = g;
                    for (size_t c = 0; c < g.cells(); ++c) {
                        if (!g.active(c) || fixed[c]) continue;
                        double s = (g.center(c)[0] - A.center[0]) * e[0] +
                                   (d > 1 ? (g.center(c)[1] - A.center[1]) * e[1] : 0.0);
                        double tau = std::fmod(s - smin, P);
                        double z = tau <= lam * P ? t1 * tau : t1 * lam * P + t2 * (tau - lam * P);
                        v.at(c) += z;
                    }
                    double en = consider(v, JumpSet{}, "laminate");
                    if (en < best_e) {
                        best_e = en;
                        best_lam = v;
                    }
                }
                if (cfg.polish && std::isfinite(best_e)) descend_from(best_lam, JumpSet{}, "laminate+descent");
            }
        }
    }
    best.budget_exhausted = !converged;
    return best;
}

inline double omega_lower(int d) { return d == 1 ? 1.0 : omega(d - 1); }

// Normalized cell minima: by omega_d eps^d for Affine data, omega_{d-1} eps^{d-1} for Step data.
inline std::vector<double> blow_up_density(const Functional& F, const BoundaryDatum& datum, const Point& x0,
                                           const std::vector<double>& eps, const CellSearchConfig& cfg = {}) {
    for (size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0)) throw ArgumentError("blow_up_density: eps must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1])) throw ArgumentError("blow_up_density: eps must decrease");
    }
    const int d = datum.dim;
    BoundaryDatum dx = datum.recentered(x0);
    std::vector<double> out;
    for (double e : eps) {
        Ball B{x0, e, d};
        if (!F.domain.contains_ball(B)) throw DomainError("blow_up_density: ball leaves the domain");
        auto r = cell_minimum(F, dx, B, cfg);
        double norm = datum.kind == DatumKind::Affine ? omega(d) * std::pow(e, d) : omega_lower(d) * std::pow(e, d - 1);
        out.push_back(r.value / norm);
    }
    return out;
}

// Qf(s) for a scalar x-independent bulk density, from the hull on [-T, T].
inline double convexified_value(const BulkIntegrand& f, double s, int d = 1, double T = 0.0, int n = 8001) {
    if (T <= 0.0) T = 4.0 * std::max(1.0, std::abs(s));
    std::vector<double> xs, fs;
    for (int k = 0; k < n; ++k) {
        double x = -T + 2.0 * T * k / (n - 1);
        std::vector<double> xi(d, 0.0);
        xi[0] = x;
        xs.push_back(x);
        fs.push_back(f(Point{0.0, 0.0}, xi));
    }
    auto [hx, hy] = detail::lower_hull(xs, fs);
    for (size_t k = 0; k + 1 < hx.size(); ++k)
        if (hx[k] <= s && s <= hx[k + 1]) {
            double lam = (s - hx[k]) / (hx[k + 1] - hx[k]);
            std::vector<double> xi(d, 0.0);
            xi[0] = s;
            return std::min(f(Point{0.0, 0.0}, xi), (1.0 - lam) * hy[k] + lam * hy[k + 1]);
        }
    throw ArgumentError("convexified_value: s outside the hull range");
}

struct RelaxationEntry {
    int mesh = 0;
    double value = 0.0;  // cell minimum / |A|
    double gap = 0.0;    // value - Qf(s)
    double relative_gap = 0.0;
    std::string family;
    bool budget_exhausted = false;
};

struct RelaxationReport {
    double slope = 0.0;
    double qf = 0.0;
    double f_at_slope = 0.0;
    std::vector<RelaxationEntry> entries;
};

inline RelaxationReport relaxation_experiment(const Functional& F, double slope, const Ball& A,
                                              const std::vector<int>& meshes, CellSearchConfig cfg = {}) {
    if (A.dim != 1) throw ArgumentError("relaxation_experiment: d = 1 required");
    if (!F.bulk.x_independent) throw ArgumentError("relaxation_experiment: x-independent bulk required");
    RelaxationReport rep;
    rep.slope = slope;
    rep.qf = convexified_value(F.bulk, slope);
    rep.f_at_slope = F.bulk(A.center, {slope});
    auto datum = BoundaryDatum::affine(1, A.center, {0.0}, {slope});
    for (int n : meshes) {
        cfg.mesh = n;
        auto r = cell_minimum(F, datum, A, cfg);
        RelaxationEntry e;
        e.mesh = n;
        e.value = r.value / r.measure;
        e.gap = e.value - rep.qf;
        e.relative_gap = rep.qf != 0.0 ? e.gap / std::abs(rep.qf) : e.gap;
        e.family = r.family;
        e.budget_exhausted = r.budget_exhausted;
        rep.entries.push_back(e);
    }
    return rep;
}

struct LscSequence {
    std::string kind;
    SbvFunction limit;
    std::vector<SbvFunction> terms;
};

// G(u) <= min_k G(u_k) + c_tol h on A; flags sequences that do not approach u in measure.
inline PropertyReport lsc_experiment(const Functional& F, const LscSequence& seq, const Domain& A, double c_tol) {
    PropertyReport rep;
    rep.property = "lsc";
    if (seq.terms.empty()) throw ArgumentError("lsc_experiment: empty sequence");
    const GridFunction& g = seq.limit.base();
    const double h = g.h(0);
    double Gu = evaluate_functional(F, seq.limit, A), Gmin = std::numeric_limits<double>::infinity();
    std::vector<double> dist;
    for (const auto& uk : seq.terms) {
        if (!uk.base().same_grid(g)) throw ArgumentError("lsc_experiment: terms must share the grid");
        double e = evaluate_functional(F, uk, A);
        if (!std::isfinite(e)) throw InvariantError("lsc_experiment: generator produced unbounded energy");
        Gmin = std::min(Gmin, e);
        double far = 0.0;
        for (size_t c = 0; c < g.cells(); ++c)
            if (g.active(c) && std::abs(uk.base().at(c) - g.at(c)) > 1e-2) far += g.cell_measure();
        dist.push_back(far);
    }
    rep.constants["G_limit"] = Gu;
    rep.constants["min_G_terms"] = Gmin;
    rep.constants["tol"] = c_tol * h;
    if (dist.size() > 1 && !(dist.back() <= dist.front())) {
        rep.note = "generator does not converge in measure";
        rep.fail({g.domain().center, 0.0, std::nullopt, dist.back(), rep.note});
        return rep;
    }
    if (!(Gu <= Gmin + c_tol * h)) {
        rep.fail({g.domain().center, 0.0, std::nullopt, Gu - Gmin, "G(u) exceeds min_k G(u_k) + tol"});
        return rep;
    }
    rep.holds = true;
    rep.constants["G_limit"] = Gu;
    rep.constants["min_G_terms"] = Gmin;
    rep.constants["tol"] = c_tol * h;
    return rep;
}

namespace detail {

inline Domain unit_box(int d) { return Domain::box(d, {0.0, 0.0}, {1.0, d > 1 ? 1.0 : 0.0}); }

}  // namespace detail

// u = s + D chi{x1 > c}; u_k replaces the jump by a ramp of width w_k with
// w_0 <= D^2 / (2 alpha2 + 4 D max|grad s| + 1) so each ramp costs more than the jump.
inline LscSequence mollified_step_sequence(Rng& rng, int mesh, int d, double alpha2, int terms = 5) {
    const Domain D = detail::unit_box(d);
    const double h = 1.0 / mesh;
    double amp = rng.uniform(0.2, 0.6), om = rng.uniform(0.5, 2.0), ph = rng.uniform(0.0, 6.283185307179586);
    double jump = (rng.coin() ? 1.0 : -1.0) * rng.uniform(1.0, 3.0);
    int ic = rng.integer(mesh / 4, 3 * mesh / 4);
    double c = ic * h;
    auto smooth = [&](const Point& x) { return amp * std::sin(om * (x[0] + (d > 1 ? 0.7 * x[1] : 0.0)) + ph); };
    double G = amp * om * 1.3;
    GridFunction base = GridFunction::sample(D, mesh, [&](const Point& x) { return smooth(x) + (x[0] > c ? jump : 0.0); });
    JumpSet J;
    for (int j = 0; j < (d > 1 ? mesh : 1); ++j) J.add(JumpFacet{ic - 1, j, 0, 1, {jump}, 1.0});
    LscSequence s;
    s.kind = "mollified-step";
    s.limit = SbvFunction::build(base, J);
    double w = jump * jump / (2.0 * alpha2 + 4.0 * std::abs(jump) * G + 1.0);
    for (int k = 0; k < terms && w >= 2.0 * h; ++k, w *= 0.5) {
        GridFunction v = GridFunction::sample(D, mesh, [&](const Point& x) {
            return smooth(x) + jump * std::clamp((x[0] - c) / w + 0.5, 0.0, 1.0);
        });
        s.terms.push_back(SbvFunction::smooth(std::move(v)));
    }
    if (s.terms.empty()) s.terms.push_back(s.limit);
    return s;
}

// u = xi.x; u_k = xi.x + (A/k) sin(2 pi k x_axis) with integer periods on the unit box.
inline LscSequence oscillation_sequence(Rng& rng, int mesh, int d, int terms = 5) {
    const Domain D = detail::unit_box(d);
    double xi0 = rng.uniform(-1.5, 1.5), xi1 = d > 1 ? rng.uniform(-1.5, 1.5) : 0.0;
    double A = rng.uniform(0.05, 0.2);
    int axis = d > 1 ? rng.integer(0, 1) : 0;
    int k0 = rng.integer(1, 3);
    auto lin = [&](const Point& x) { return xi0 * x[0] + xi1 * x[1]; };
    LscSequence s;
    s.kind = "oscillation";
    s.limit = SbvFunction::smooth(GridFunction::sample(D, mesh, lin));
    for (int k = k0; k < k0 + terms; ++k) {
        double period_count = static_cast<double>(k);
        if (4.0 * period_count > mesh) break;
        s.terms.push_back(SbvFunction::smooth(GridFunction::sample(D, mesh, [&](const Point& x) {
            return lin(x) + A / period_count * std::sin(2.0 * std::numbers::pi * period_count * x[axis]);
        })));
    }
    return s;
}

}  // namespace olab
