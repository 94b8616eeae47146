#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "olab/error.hpp"
#include "olab/grid.hpp"

namespace olab {

// Facet between cell (i,j) and its +axis neighbour. The normal is
// nu_sign * e_axis and amp = u(+side) - u(-side), the + side being the one
// the normal points into.
struct JumpFacet {
    int i = 0;
    int j = 0;
    int axis = 0;
    int nu_sign = 1;
    std::vector<double> amp;
    double weight = 1.0;  // staircase correction for oblique interfaces
};

class JumpSet {
public:
    JumpSet() = default;
    explicit JumpSet(std::vector<JumpFacet> facets) : facets_(std::move(facets)) {}

    const std::vector<JumpFacet>& facets() const { return facets_; }
    std::vector<JumpFacet>& facets() { return facets_; }
    bool empty() const { return facets_.empty(); }
    size_t size() const { return facets_.size(); }
    void add(JumpFacet f) { facets_.push_back(std::move(f)); }

    static double facet_measure(const GridFunction& g, const JumpFacet& f) {
        double base = g.dim() > 1 ? g.h(1 - f.axis) : 1.0;
        return base * f.weight;
    }
    static Point facet_midpoint(const GridFunction& g, const JumpFacet& f) {
        Point p = g.center(g.index(f.i, f.j));
        p[f.axis] += 0.5 * g.h(f.axis);
        return p;
    }
    static Point facet_normal(const JumpFacet& f) {
        Point n{0.0, 0.0};
        n[f.axis] = static_cast<double>(f.nu_sign);
        return n;
    }
    double total_measure(const GridFunction& g) const {
        double s = 0.0;
        for (const auto& f : facets_) s += facet_measure(g, f);
        return s;
    }

private:
    std::vector<JumpFacet> facets_;
};

// Two-point difference (u[plus] - u[minus]) * inv; zero when plus == minus.
struct StencilEntry {
    size_t plus = 0;
    size_t minus = 0;
    double inv = 0.0;
};

// Cellwise gradient stencil that never differences across a jump facet or
// into an inactive cell: central where both neighbours are usable, one sided
// where one is, zero otherwise. Entry (c, axis) lives at c * d + axis.
class GradientStencil {
public:
    GradientStencil() = default;
    GradientStencil(const GridFunction& g, const JumpSet& J) : d_(g.dim()) {
        std::unordered_set<size_t> blocked;
        for (const auto& f : J.facets()) blocked.insert(key(g.index(f.i, f.j), f.axis));
        entries_.resize(g.cells() * d_);
        for (size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            const int i = g.ix(c), j = g.iy(c);
            for (int axis = 0; axis < d_; ++axis) {
                const int n = axis == 0 ? g.nx() : g.ny();
                const int pos = axis == 0 ? i : j;
                auto neighbour = [&](int delta) -> long {
                    int q = pos + delta;
                    if (q < 0 || q >= n) return -1;
                    size_t nb = axis == 0 ? g.index(q, j) : g.index(i, q);
                    if (!g.active(nb)) return -1;
                    size_t lower = delta > 0 ? c : nb;
                    if (blocked.count(key(lower, axis))) return -1;
                    return static_cast<long>(nb);
                };
                long up = neighbour(1), dn = neighbour(-1);
                const double h = g.h(axis);
                StencilEntry e{c, c, 0.0};
                if (up >= 0 && dn >= 0) e = {static_cast<size_t>(up), static_cast<size_t>(dn), 0.5 / h};
                else if (up >= 0) e = {static_cast<size_t>(up), c, 1.0 / h};
                else if (dn >= 0) e = {c, static_cast<size_t>(dn), 1.0 / h};
                entries_[c * d_ + axis] = e;
            }
        }
    }

    int dim() const { return d_; }
    const StencilEntry& entry(size_t c, int axis) const { return entries_[c * d_ + axis]; }

    template <class Values>
    double apply(const Values& u, size_t c, int axis, int m = 1, int comp = 0) const {
        const auto& e = entry(c, axis);
        if (e.plus == e.minus) return 0.0;
        return (u[e.plus * m + comp] - u[e.minus * m + comp]) * e.inv;
    }

private:
    static size_t key(size_t cell, int axis) { return cell * 2 + static_cast<size_t>(axis); }
    int d_ = 1;
    std::vector<StencilEntry> entries_;
};

// Discrete SBV function: cell values, explicit jump set, cellwise gradient
// with m*d components (component k, axis a at k*d + a).
class SbvFunction {
public:
    SbvFunction() = default;

    static SbvFunction build(GridFunction base, JumpSet jumps) {
        validate(base, jumps);
        SbvFunction u;
        u.stencil_ = GradientStencil(base, jumps);
        u.base_ = std::move(base);
        u.jumps_ = std::move(jumps);
        u.recompute_gradient();
        return u;
    }
    static SbvFunction smooth(GridFunction base) { return build(std::move(base), JumpSet{}); }

    const GridFunction& base() const { return base_; }
    const JumpSet& jumps() const { return jumps_; }
    const GridFunction& gradient() const { return grad_; }
    const GradientStencil& stencil() const { return stencil_; }
    int dim() const { return base_.dim(); }
    int components() const { return base_.components(); }

    double gradient_norm(size_t c) const { return grad_.magnitude(c); }

    // Same jump set, new cell values; the gradient is recomputed.
    SbvFunction with_values(const GridFunction& values) const {
        if (!values.same_grid(base_) || values.components() != base_.components())
            throw ArgumentError("with_values: grid mismatch");
        SbvFunction u = *this;
        u.base_ = values;
        u.recompute_gradient();
        return u;
    }

    static void validate(const GridFunction& g, const JumpSet& J) {
        std::set<std::pair<size_t, int>> seen;
        for (const auto& f : J.facets()) {
            if (f.axis < 0 || f.axis >= g.dim()) throw InvariantError("jump facet: bad axis");
            if (f.nu_sign != 1 && f.nu_sign != -1) throw InvariantError("jump facet: normal sign must be +-1");
            int i2 = f.i + (f.axis == 0 ? 1 : 0), j2 = f.j + (f.axis == 1 ? 1 : 0);
            if (f.i < 0 || f.j < 0 || i2 >= g.nx() || j2 >= g.ny())
                throw InvariantError("jump facet: cell index out of range");
            if (!g.active(g.index(f.i, f.j)) || !g.active(g.index(i2, j2)))
                throw InvariantError("jump facet: adjacent cell inactive");
            if (static_cast<int>(f.amp.size()) != g.components())
                throw InvariantError("jump facet: amplitude has wrong size");
            bool nonzero = false;
            for (double a : f.amp) nonzero = nonzero || a != 0.0;
            if (!nonzero) throw InvariantError("jump facet: zero amplitude");
            if (!seen.insert({g.index(f.i, f.j), f.axis}).second) throw InvariantError("jump facet listed twice");
        }
    }

private:
    void recompute_gradient() {
        const int d = base_.dim(), m = base_.components();
        grad_ = GridFunction(base_.domain(), base_.shape(), m * d);
        const auto& vals = base_.values();
        for (size_t c = 0; c < base_.cells(); ++c) {
            if (!base_.active(c)) continue;
            for (int k = 0; k < m; ++k)
                for (int a = 0; a < d; ++a) grad_.at(c, k * d + a) = stencil_.apply(vals, c, a, m, k);
        }
    }

    GridFunction base_;
    JumpSet jumps_;
    GridFunction grad_;
    GradientStencil stencil_;
};

// Facets of J intersected with a closed ball (by facet midpoint).
inline double jump_measure_in(const SbvFunction& u, const Ball& B) {
    double s = 0.0;
    for (const auto& f : u.jumps().facets())
        if (B.contains(JumpSet::facet_midpoint(u.base(), f))) s += JumpSet::facet_measure(u.base(), f);
    return s;
}

// Jump facets where the cell values of g differ, amplitudes read from the values.
inline JumpSet jumps_from_values(const GridFunction& g, const std::vector<std::pair<size_t, int>>& candidates) {
    JumpSet J;
    const int m = g.components();
    for (auto [c, axis] : candidates) {
        int i = g.ix(c), j = g.iy(c);
        size_t nb = axis == 0 ? g.index(i + 1, j) : g.index(i, j + 1);
        JumpFacet f{i, j, axis, 1, std::vector<double>(m), 1.0};
        bool nonzero = false;
        for (int k = 0; k < m; ++k) {
            f.amp[k] = g.at(nb, k) - g.at(c, k);
            nonzero = nonzero || f.amp[k] != 0.0;
        }
        if (nonzero) J.add(std::move(f));
    }
    return J;
}

inline void write_jmp(std::ostream& os, const GridFunction& g, const JumpSet& J) {
    os << "jmp 1 d=" << g.dim() << " m=" << g.components() << '\n';
    char buf[40];
    for (const auto& f : J.facets()) {
        if (g.dim() > 1) os << f.i << ' ' << f.j << ' ' << f.axis << ' ' << f.nu_sign;
        else os << f.i;
        for (double a : f.amp) {
            std::snprintf(buf, sizeof buf, "%.17g", a);
            os << ' ' << buf;
        }
        os << '\n';
    }
}

inline JumpSet read_jmp(std::istream& is, const GridFunction& g) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("jmp: empty input");
    std::istringstream hs(line);
    std::string magic, version, dtok, mtok;
    hs >> magic >> version >> dtok >> mtok;
    if (magic != "jmp" || version != "1") throw ParseError("jmp: bad header magic");
    if (dtok != "d=" + std::to_string(g.dim()) || mtok != "m=" + std::to_string(g.components()))
        throw ParseError("jmp: header does not match the grid function");
    JumpSet J;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        JumpFacet f;
        bool ok = true;
        if (g.dim() > 1) ok = static_cast<bool>(ls >> f.i >> f.j >> f.axis >> f.nu_sign);
        else ok = static_cast<bool>(ls >> f.i);
        f.amp.resize(g.components());
        for (auto& a : f.amp) ok = ok && static_cast<bool>(ls >> a);
        if (!ok) throw ParseError("jmp: bad facet line " + std::to_string(lineno));
        J.add(std::move(f));
    }
    return J;
}

inline SbvFunction load_sbv(const std::string& gfn_path, const std::string& jmp_path) {
    GridFunction g = load_gfn(gfn_path);
    std::ifstream in(jmp_path);
    if (!in) return SbvFunction::smooth(std::move(g));
    JumpSet J = read_jmp(in, g);
    return SbvFunction::build(std::move(g), std::move(J));
}

inline void save_sbv(const std::string& gfn_path, const std::string& jmp_path, const SbvFunction& u) {
    save_gfn(gfn_path, u.base());
    std::ofstream out(jmp_path);
    if (!out) throw IoError("cannot write " + jmp_path);
    write_jmp(out, u.base(), u.jumps());
}

}  // namespace olab
