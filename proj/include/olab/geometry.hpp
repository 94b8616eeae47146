#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "olab/error.hpp"

namespace olab {

using Point = std::array<double, 2>;

// Measure of the unit ball in R^d (omega_0 = 1 by convention).
inline double omega(int d) {
    switch (d) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        default: throw ArgumentError("omega: dimension must be 0, 1 or 2");
    }
}

inline double distance(const Point& a, const Point& b, int d) {
    double dx = a[0] - b[0];
    double dy = d > 1 ? a[1] - b[1] : 0.0;
    return std::hypot(dx, dy);
}

struct Ball {
    Point center{0.0, 0.0};
    double radius = 1.0;
    int dim = 2;

    double diameter() const { return 2.0 * radius; }
    double measure() const { return omega(dim) * std::pow(radius, dim); }
    bool contains(const Point& p, double rel_tol = 1e-12) const {
        return distance(p, center, dim) <= radius * (1.0 + rel_tol);
    }
};

enum class DomainKind { Box, Ball };

struct Domain {
    DomainKind kind = DomainKind::Box;
    int dim = 2;
    Point lo{0.0, 0.0};
    Point hi{1.0, 1.0};
    Point center{0.0, 0.0};
    double radius = 1.0;

    static Domain box(int d, Point lo, Point hi) {
        if (d != 1 && d != 2) throw ArgumentError("domain dimension must be 1 or 2");
        Domain D;
        D.kind = DomainKind::Box;
        D.dim = d;
        D.lo = lo;
        D.hi = hi;
        if (d == 1) D.lo[1] = D.hi[1] = 0.0;
        for (int k = 0; k < d; ++k)
            if (!(D.hi[k] > D.lo[k])) throw ArgumentError("box domain needs positive extent");
        D.center = {(D.lo[0] + D.hi[0]) / 2, (D.lo[1] + D.hi[1]) / 2};
        return D;
    }
    static Domain ball(int d, Point c, double r) {
        if (d != 1 && d != 2) throw ArgumentError("domain dimension must be 1 or 2");
        if (!(r > 0)) throw ArgumentError("ball domain needs positive radius");
        Domain D;
        D.kind = DomainKind::Ball;
        D.dim = d;
        D.center = c;
        if (d == 1) D.center[1] = 0.0;
        D.radius = r;
        D.lo = {D.center[0] - r, d > 1 ? D.center[1] - r : 0.0};
        D.hi = {D.center[0] + r, d > 1 ? D.center[1] + r : 0.0};
        return D;
    }
    static Domain unit_ball(int d) { return ball(d, {0.0, 0.0}, 1.0); }

    double scale() const { return std::max(hi[0] - lo[0], dim > 1 ? hi[1] - lo[1] : 0.0); }

    bool contains(const Point& p, double rel_tol = 1e-9) const {
        double tol = rel_tol * scale();
        if (kind == DomainKind::Ball) return distance(p, center, dim) <= radius + tol;
        for (int k = 0; k < dim; ++k)
            if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) return false;
        return true;
    }

    bool contains_ball(const Ball& B, double rel_tol = 1e-9) const {
        double tol = rel_tol * scale();
        if (kind == DomainKind::Ball) return distance(B.center, center, dim) + B.radius <= radius + tol;
        for (int k = 0; k < dim; ++k)
            if (B.center[k] - B.radius < lo[k] - tol || B.center[k] + B.radius > hi[k] + tol) return false;
        return true;
    }

    double diameter() const {
        if (kind == DomainKind::Ball) return 2.0 * radius;
        double dx = hi[0] - lo[0];
        double dy = dim > 1 ? hi[1] - lo[1] : 0.0;
        return std::sqrt(dx * dx + dy * dy);
    }

    double measure() const {
        if (kind == DomainKind::Ball) return omega(dim) * std::pow(radius, dim);
        return (hi[0] - lo[0]) * (dim > 1 ? hi[1] - lo[1] : 1.0);
    }

    Ball as_ball() const {
        if (kind != DomainKind::Ball) throw ArgumentError("domain is not a ball");
        return Ball{center, radius, dim};
    }

    std::string kind_name() const { return kind == DomainKind::Ball ? "ball" : "box"; }

    // geom token of the GFN header: box "x0,x1" or "x0,y0,x1,y1"; ball "cx,r" or "cx,cy,r".
    std::string geom_string() const {
        std::ostringstream os;
        os.precision(17);
        if (kind == DomainKind::Ball) {
            os << center[0];
            if (dim > 1) os << ',' << center[1];
            os << ',' << radius;
        } else if (dim == 1) {
            os << lo[0] << ',' << hi[0];
        } else {
            os << lo[0] << ',' << lo[1] << ',' << hi[0] << ',' << hi[1];
        }
        return os.str();
    }

    bool same_as(const Domain& o, double tol = 1e-12) const {
        if (kind != o.kind || dim != o.dim) return false;
        auto close = [&](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); };
        if (kind == DomainKind::Ball)
            return close(radius, o.radius) && close(center[0], o.center[0]) && close(center[1], o.center[1]);
        return close(lo[0], o.lo[0]) && close(lo[1], o.lo[1]) && close(hi[0], o.hi[0]) && close(hi[1], o.hi[1]);
    }
};

// Deterministic lattice in a closed ball: a square grid restricted to the ball,
// a ring of boundary points and the center. At least 256*d points.
inline std::vector<Point> ball_lattice(const Ball& B) {
    std::vector<Point> pts;
    const Point& c = B.center;
    const double r = B.radius;
    if (B.dim == 1) {
        const int n = 256;
        pts.reserve(n + 1);
        for (int k = 0; k <= n; ++k) pts.push_back({c[0] - r + 2.0 * r * k / n, 0.0});
        return pts;
    }
    const int k = 25;
    pts.reserve(k * k + 65);
    pts.push_back(c);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double u = -1.0 + 2.0 * i / (k - 1);
            double v = -1.0 + 2.0 * j / (k - 1);
            if (i == k / 2 && j == k / 2) continue;
            if (u * u + v * v <= 1.0 + 1e-12) pts.push_back({c[0] + r * u, c[1] + r * v});
        }
    }
    const int ring = 64;
    for (int m = 0; m < ring; ++m) {
        double th = 2.0 * std::numbers::pi * m / ring;
        pts.push_back({c[0] + r * std::cos(th), c[1] + r * std::sin(th)});
    }
    return pts;
}

// Deterministic lattice covering a domain, boundary included.
inline std::vector<Point> domain_lattice(const Domain& D, int per_axis = 17) {
    std::vector<Point> pts;
    if (D.kind == DomainKind::Ball) {
        for (const auto& p : ball_lattice(D.as_ball()))
            pts.push_back(p);
        return pts;
    }
    if (D.dim == 1) {
        int n = 8 * (per_axis - 1);
        for (int k = 0; k <= n; ++k) pts.push_back({D.lo[0] + (D.hi[0] - D.lo[0]) * k / n, 0.0});
        return pts;
    }
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j)
            pts.push_back({D.lo[0] + (D.hi[0] - D.lo[0]) * i / (per_axis - 1),
                           D.lo[1] + (D.hi[1] - D.lo[1]) * j / (per_axis - 1)});
    pts.push_back(D.center);
    return pts;
}

inline std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> g(static_cast<size_t>(n));
    if (n == 1) {
        g[0] = a;
        return g;
    }
    const double la = std::log(a), lb = std::log(b);
    for (int k = 0; k < n; ++k) g[k] = std::exp(la + (lb - la) * k / (n - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

}  // namespace olab
