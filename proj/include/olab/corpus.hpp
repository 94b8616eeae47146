#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/grid.hpp"
#include "olab/random.hpp"
#include "olab/rearrangement.hpp"
#include "olab/sbv.hpp"

namespace olab {

enum class CorpusKind { Smooth, Jumpy, Laminate };

inline std::string corpus_kind_name(CorpusKind k) {
    switch (k) {
        case CorpusKind::Smooth: return "smooth";
        case CorpusKind::Jumpy: return "jumpy";
        case CorpusKind::Laminate: return "laminate";
    }
    return "smooth";
}

inline CorpusKind corpus_kind_from_name(const std::string& s) {
    if (s == "smooth") return CorpusKind::Smooth;
    if (s == "jumpy") return CorpusKind::Jumpy;
    if (s == "laminate") return CorpusKind::Laminate;
    throw ParseError("unknown corpus kind '" + s + "'");
}

// Sum of three random plane waves with frequencies in [0.5, 4].
struct TrigField {
    struct Wave {
        double amp, wx, wy, phase;
    };
    std::vector<Wave> waves;

    static TrigField random(Rng& rng, int d) {
        TrigField f;
        for (int k = 0; k < 3; ++k) {
            double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
            double om = rng.uniform(0.5, 4.0);
            Wave w{rng.uniform(-1.0, 1.0), om * std::cos(ang), d > 1 ? om * std::sin(ang) : 0.0,
                   rng.uniform(0.0, 2.0 * std::numbers::pi)};
            if (d == 1) w.wx = (rng.coin() ? 1.0 : -1.0) * om;
            f.waves.push_back(w);
        }
        return f;
    }
    double operator()(const Point& x) const {
        double s = 0.0;
        for (const auto& w : waves) s += w.amp * std::sin(w.wx * x[0] + w.wy * x[1] + w.phase);
        return s;
    }
};

// Largest jump measure allowed in B by the small-jump condition.
inline double max_small_jump_measure(double ball_measure, int d, double gamma_iso) {
    if (d == 1) return 0.0;
    return std::pow(0.5 * ball_measure, static_cast<double>(d - 1) / d) / (2.0 * gamma_iso);
}

namespace detail {

inline Domain corpus_domain(int d) { return Domain::unit_ball(d); }

inline SbvFunction smooth_element(Rng& rng, int mesh, int d) {
    TrigField f = TrigField::random(rng, d);
    return SbvFunction::smooth(GridFunction::sample(corpus_domain(d), mesh, [&](const Point& x) { return f(x); }));
}

inline SbvFunction laminate_element(Rng& rng, int mesh, int d) {
    double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Point dir{std::cos(ang), d > 1 ? std::sin(ang) : 0.0};
    if (d == 1) dir = {1.0, 0.0};
    double period = rng.uniform(0.25, 1.0), amp = rng.uniform(0.2, 1.0), shift = rng.uniform(0.0, 1.0);
    auto tri = [](double z) { return 2.0 * std::abs(z - std::floor(z + 0.5)); };
    return SbvFunction::smooth(GridFunction::sample(corpus_domain(d), mesh, [&](const Point& x) {
        return amp * tri((dir[0] * x[0] + dir[1] * x[1]) / period + shift);
    }));
}

// Smooth field plus grid-snapped axis-aligned squares; total continuum
// perimeter at most 0.8 of the small-jump budget.
inline SbvFunction jumpy_element(Rng& rng, int mesh, int d) {
    if (d != 2) throw ArgumentError("jumpy corpus: dimension 2 only");
    const Domain D = corpus_domain(d);
    TrigField f = TrigField::random(rng, d);
    GridFunction g = GridFunction::sample(D, mesh, [&](const Point& x) { return f(x); });
    const double budget = 0.8 * max_small_jump_measure(std::numbers::pi, d, default_gamma_iso(d));
    const int count = rng.integer(1, 2);
    std::vector<double> jump(g.cells(), 0.0);
    double used = 0.0;
    for (int k = 0; k < count; ++k) {
        const double room = 0.25 * (budget - used);
        if (room < 0.08) break;
        double side = rng.uniform(0.08, std::min(0.25, room));
        Point c;
        do {
            c = {rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        } while (std::hypot(std::abs(c[0]) + side / 2, std::abs(c[1]) + side / 2) > 0.9);
        double height = (rng.coin() ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
        used += 4.0 * side;
        for (size_t cell = 0; cell < g.cells(); ++cell) {
            Point x = g.center(cell);
            if (std::abs(x[0] - c[0]) < side / 2 && std::abs(x[1] - c[1]) < side / 2) jump[cell] += height;
        }
    }
    JumpSet J;
    for (size_t cell = 0; cell < g.cells(); ++cell) {
        if (!g.active(cell)) continue;
        g.at(cell) += jump[cell];
        int i = g.ix(cell), j = g.iy(cell);
        for (int axis = 0; axis < 2; ++axis) {
            int i2 = i + (axis == 0), j2 = j + (axis == 1);
            if (i2 >= g.nx() || j2 >= g.ny()) continue;
            size_t nb = g.index(i2, j2);
            if (!g.active(nb) || jump[nb] == jump[cell]) continue;
            J.add(JumpFacet{i, j, axis, 1, {jump[nb] - jump[cell]}, 1.0});
        }
    }
    SbvFunction u = SbvFunction::build(std::move(g), std::move(J));
    Ball B = D.as_ball();
    double M = ball_cell_measure(u.base(), B);
    double lam = small_jump_lambda(jump_measure_in(u, B), d, default_gamma_iso(d));
    if (!(lam <= 0.5 * M)) throw InvariantError("jumpy corpus: small-jump condition violated at generation");
    return u;
}

}  // namespace detail

// Seeded corpus on the unit ball; element k uses stream derive_seed(seed, k).
inline std::vector<SbvFunction> generate_corpus(CorpusKind kind, int n, int mesh, std::uint64_t seed, int d = 2) {
    if (n <= 0 || mesh <= 0) throw ArgumentError("generate_corpus: n and mesh must be positive");
    std::vector<SbvFunction> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        switch (kind) {
            case CorpusKind::Smooth: out.push_back(detail::smooth_element(rng, mesh, d)); break;
            case CorpusKind::Jumpy: out.push_back(detail::jumpy_element(rng, mesh, d)); break;
            case CorpusKind::Laminate: out.push_back(detail::laminate_element(rng, mesh, d)); break;
        }
    }
    return out;
}

// Seeded scalar grid functions on D: a trig field plus two Gaussian bumps.
inline std::vector<GridFunction> random_grid_functions(const Domain& D, int mesh, int n, std::uint64_t seed) {
    std::vector<GridFunction> out;
    for (int k = 0; k < n; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        TrigField f = TrigField::random(rng, D.dim);
        double scale = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
        Point b1{rng.uniform(D.lo[0], D.hi[0]), rng.uniform(D.lo[1], D.hi[1])};
        Point b2{rng.uniform(D.lo[0], D.hi[0]), rng.uniform(D.lo[1], D.hi[1])};
        double a1 = rng.uniform(-3.0, 3.0), a2 = rng.uniform(-3.0, 3.0);
        double w1 = rng.uniform(0.05, 0.3), w2 = rng.uniform(0.05, 0.3);
        out.push_back(GridFunction::sample(D, mesh, [&](const Point& x) {
            auto bump = [&](const Point& c, double w) {
                double r2 = (x[0] - c[0]) * (x[0] - c[0]) + (D.dim > 1 ? (x[1] - c[1]) * (x[1] - c[1]) : 0.0);
                return std::exp(-r2 / (w * w));
            };
            return scale * (f(x) + a1 * bump(b1, w1) + a2 * bump(b2, w2));
        }));
    }
    return out;
}

}  // namespace olab
