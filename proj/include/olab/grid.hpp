#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/spatial_field.hpp"

namespace olab {

// Scalar or vector field sampled at cell centers of a uniform grid over the
// bounding box of a domain. For ball domains, cells whose center lies outside
// the ball are inactive and carry no mass.
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(const Domain& D, std::array<int, 2> n, int m = 1) : domain_(D), n_(n), m_(m) {
        if (D.dim == 1) n_[1] = 1;
        if (n_[0] < 1 || n_[1] < 1) throw ArgumentError("grid resolution must be positive");
        if (m < 1) throw ArgumentError("component count must be positive");
        h_[0] = (D.hi[0] - D.lo[0]) / n_[0];
        h_[1] = D.dim > 1 ? (D.hi[1] - D.lo[1]) / n_[1] : 1.0;
        const size_t N = cells();
        values_.assign(N * m_, 0.0);
        active_.assign(N, 1);
        if (D.kind == DomainKind::Ball) {
            for (size_t c = 0; c < N; ++c) active_[c] = D.contains(center(c), 0.0) ? 1 : 0;
        }
        count_active_ = 0;
        for (auto a : active_) count_active_ += a;
    }

    // Square mesh with n cells per axis.
    GridFunction(const Domain& D, int n, int m = 1) : GridFunction(D, std::array<int, 2>{n, n}, m) {}

    template <class F>
    static GridFunction sample(const Domain& D, std::array<int, 2> n, F&& f) {
        GridFunction g(D, n, 1);
        for (size_t c = 0; c < g.cells(); ++c)
            if (g.active(c)) g.at(c) = f(g.center(c));
        return g;
    }
    template <class F>
    static GridFunction sample(const Domain& D, int n, F&& f) {
        return sample(D, std::array<int, 2>{n, n}, std::forward<F>(f));
    }

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim; }
    int nx() const { return n_[0]; }
    int ny() const { return n_[1]; }
    std::array<int, 2> shape() const { return n_; }
    int components() const { return m_; }
    double h(int axis) const { return h_[axis]; }
    double cell_measure() const { return domain_.dim > 1 ? h_[0] * h_[1] : h_[0]; }
    size_t cells() const { return static_cast<size_t>(n_[0]) * n_[1]; }
    size_t active_count() const { return count_active_; }
    double active_measure() const { return static_cast<double>(count_active_) * cell_measure(); }

    size_t index(int i, int j) const { return static_cast<size_t>(j) * n_[0] + i; }
    int ix(size_t c) const { return static_cast<int>(c % n_[0]); }
    int iy(size_t c) const { return static_cast<int>(c / n_[0]); }

    Point center(size_t c) const {
        return {domain_.lo[0] + (ix(c) + 0.5) * h_[0], domain_.dim > 1 ? domain_.lo[1] + (iy(c) + 0.5) * h_[1] : 0.0};
    }
    bool active(size_t c) const { return active_[c] != 0; }

    double& at(size_t c, int comp = 0) { return values_[c * m_ + comp]; }
    double at(size_t c, int comp = 0) const { return values_[c * m_ + comp]; }
    double magnitude(size_t c) const {
        if (m_ == 1) return std::abs(values_[c]);
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += values_[c * m_ + k] * values_[c * m_ + k];
        return std::sqrt(s);
    }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Cell whose closed box contains p, if any.
    std::optional<size_t> locate(const Point& p) const {
        int i = static_cast<int>(std::floor((p[0] - domain_.lo[0]) / h_[0]));
        int j = domain_.dim > 1 ? static_cast<int>(std::floor((p[1] - domain_.lo[1]) / h_[1])) : 0;
        if (i == n_[0]) i = n_[0] - 1;
        if (j == n_[1]) j = n_[1] - 1;
        if (i < 0 || j < 0 || i >= n_[0] || j >= n_[1]) return std::nullopt;
        return index(i, j);
    }

    double max_magnitude() const {
        double m = 0.0;
        for (size_t c = 0; c < cells(); ++c)
            if (active(c)) m = std::max(m, magnitude(c));
        return m;
    }

    GridFunction scaled(double s) const {
        GridFunction g = *this;
        for (auto& v : g.values_) v *= s;
        return g;
    }

    bool same_grid(const GridFunction& o) const {
        return domain_.same_as(o.domain_) && n_ == o.n_;
    }

private:
    Domain domain_;
    std::array<int, 2> n_{1, 1};
    int m_ = 1;
    std::array<double, 2> h_{1.0, 1.0};
    std::vector<double> values_;
    std::vector<std::uint8_t> active_;
    size_t count_active_ = 0;
};

// Multilinear interpolation of cell-center values, clamped at the outer half cell.
inline SpatialField field_from_grid(const GridFunction& g, int comp = 0) {
    auto shared = std::make_shared<GridFunction>(g);
    return SpatialField::function(
        [shared, comp](const Point& p) {
            const GridFunction& G = *shared;
            const Domain& D = G.domain();
            auto coord = [&](int axis, int n) {
                double u = (p[axis] - D.lo[axis]) / G.h(axis) - 0.5;
                u = std::clamp(u, 0.0, static_cast<double>(n - 1));
                int i0 = std::min(static_cast<int>(std::floor(u)), std::max(n - 2, 0));
                return std::pair<int, double>{i0, n > 1 ? u - i0 : 0.0};
            };
            auto [i0, fx] = coord(0, G.nx());
            if (G.dim() == 1) {
                int i1 = std::min(i0 + 1, G.nx() - 1);
                return (1 - fx) * G.at(G.index(i0, 0), comp) + fx * G.at(G.index(i1, 0), comp);
            }
            auto [j0, fy] = coord(1, G.ny());
            int i1 = std::min(i0 + 1, G.nx() - 1), j1 = std::min(j0 + 1, G.ny() - 1);
            return (1 - fx) * (1 - fy) * G.at(G.index(i0, j0), comp) + fx * (1 - fy) * G.at(G.index(i1, j0), comp) +
                   (1 - fx) * fy * G.at(G.index(i0, j1), comp) + fx * fy * G.at(G.index(i1, j1), comp);
        },
        "grid");
}

namespace gfn {

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw ParseError("bad number '" + tok + "'");
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number '" + tok + "'");
        } catch (const std::out_of_range&) {
            throw ParseError("number out of range '" + tok + "'");
        }
    }
    return out;
}

inline Domain parse_domain(int d, const std::string& kind, const std::string& geom) {
    auto g = parse_list(geom);
    if (kind == "box") {
        if (d == 1 && g.size() == 2) return Domain::box(1, {g[0], 0.0}, {g[1], 0.0});
        if (d == 2 && g.size() == 4) return Domain::box(2, {g[0], g[1]}, {g[2], g[3]});
        throw ParseError("box geometry needs 2*d numbers");
    }
    if (kind == "ball") {
        if (d == 1 && g.size() == 2) return Domain::ball(1, {g[0], 0.0}, g[1]);
        if (d == 2 && g.size() == 3) return Domain::ball(2, {g[0], g[1]}, g[2]);
        throw ParseError("ball geometry needs d+1 numbers");
    }
    throw ParseError("unknown domain kind '" + kind + "'");
}

}  // namespace gfn

inline void write_gfn(std::ostream& os, const GridFunction& g) {
    const Domain& D = g.domain();
    os << "gfn 1 d=" << D.dim << " kind=" << D.kind_name() << " geom=" << D.geom_string() << " n=" << g.nx();
    if (D.dim > 1) os << ',' << g.ny();
    os << " m=" << g.components() << '\n';
    char buf[40];
    for (size_t c = 0; c < g.cells(); ++c) {
        for (int k = 0; k < g.components(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", g.at(c, k));
            if (k) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

inline GridFunction read_gfn(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("gfn: empty input");
    std::istringstream hs(line);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "gfn" || version != "1") throw ParseError("gfn: bad header magic");
    int d = 0, m = 0;
    std::string kind, geom, nstr;
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("gfn: bad header token '" + tok + "'");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "d") d = std::stoi(val);
            else if (key == "kind") kind = val;
            else if (key == "geom") geom = val;
            else if (key == "n") nstr = val;
            else if (key == "m") m = std::stoi(val);
            else throw ParseError("gfn: unknown header key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ParseError("gfn: bad header value for '" + key + "'");
        }
    }
    if (d != 1 && d != 2) throw ParseError("gfn: d must be 1 or 2");
    if (m < 1) throw ParseError("gfn: m must be positive");
    Domain D = gfn::parse_domain(d, kind, geom);
    auto ns = gfn::parse_list(nstr);
    if (ns.size() != static_cast<size_t>(d)) throw ParseError("gfn: n needs d entries");
    std::array<int, 2> n{static_cast<int>(ns[0]), d > 1 ? static_cast<int>(ns[1]) : 1};
    GridFunction g(D, n, m);
    for (size_t c = 0; c < g.cells(); ++c) {
        if (!std::getline(is, line)) throw ParseError("gfn: too few value lines");
        std::istringstream ls(line);
        for (int k = 0; k < m; ++k) {
            double v;
            if (!(ls >> v)) throw ParseError("gfn: bad value line " + std::to_string(c + 2));
            if (!std::isfinite(v)) throw ParseError("gfn: non-finite value");
            g.at(c, k) = v;
        }
    }
    return g;
}

inline GridFunction load_gfn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_gfn(in);
}

inline void save_gfn(const std::string& path, const GridFunction& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_gfn(out, g);
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace olab
