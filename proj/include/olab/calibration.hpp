#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "olab/cell_formula.hpp"
#include "olab/corpus.hpp"
#include "olab/functionals.hpp"
#include "olab/orlicz.hpp"
#include "olab/poincare.hpp"
#include "olab/random.hpp"

namespace olab {

// Pilot fits. Each returns the largest per-case constant; frozen values are
// these maxima times kSafetyMargin.
inline constexpr double kSafetyMargin = 1.25;

struct PoincareFit {
    double inverse = 0.0;
    double homogeneous = 0.0;
};

inline PoincareFit fit_poincare_constants(const PhiFunction& phi, const std::vector<SbvFunction>& corpus,
                                          const Ball& B) {
    PoincareFit fit;
    for (const auto& u : corpus) {
        PoincareData pd = poincare_data(u, B, default_gamma_iso(u.dim()));
        fit.inverse = std::max(fit.inverse, minimal_constant_inverse(phi, pd));
        fit.homogeneous = std::max(fit.homogeneous, minimal_constant_homogeneous(phi, pd));
    }
    return fit;
}

struct GeneralizedFit {
    double p1 = 0.0;
    double p2 = 0.0;
};

inline GeneralizedFit fit_generalized_constants(const GeneralizedGate& gate, const PhiFunction& phi,
                                                const std::vector<SbvFunction>& corpus) {
    GeneralizedFit fit;
    for (const auto& u : corpus) {
        auto T = generalized_terms(gate, phi, u, default_gamma_iso(u.dim()));
        if (T.p1_lhs > 0.0) fit.p1 = std::max(fit.p1, T.p1_rhs > 0.0 ? T.p1_lhs / T.p1_rhs : HUGE_VAL);
        if (T.p2_lhs > 0.0) fit.p2 = std::max(fit.p2, T.p2_rhs > 0.0 ? T.p2_lhs / T.p2_rhs : HUGE_VAL);
    }
    return fit;
}

// Largest observed ||Mf||_gamma / ||f||_gamma.
inline double fit_maximal_c1(const std::vector<GridFunction>& corpus, double gamma) {
    double c1 = 0.0;
    for (const auto& f : corpus) {
        double nf = lp_norm(f, gamma);
        if (nf > 0.0) c1 = std::max(c1, lp_norm(maximal_operator(f), gamma) / nf);
    }
    return c1;
}

// Nonnegative 1D profiles on (0, 1) for the Hardy inequality.
inline std::vector<GridFunction> hardy_profiles(int mesh, int n, std::uint64_t seed) {
    const Domain I = Domain::box(1, {0.0, 0.0}, {1.0, 0.0});
    std::vector<GridFunction> out;
    for (auto& g : random_grid_functions(I, mesh, n, seed)) {
        GridFunction h(I, g.shape(), 1);
        for (size_t c = 0; c < g.cells(); ++c) h.at(c) = std::abs(g.at(c));
        out.push_back(std::move(h));
    }
    return out;
}

inline double fit_hardy_c1(const PhiFunction& phi, const std::vector<GridFunction>& profiles, int d) {
    double c1 = 0.0;
    for (const auto& h : profiles) c1 = std::max(c1, minimal_constant_hardy(phi, h, d));
    return c1;
}

// Jump-free convex pilot: largest (G(u) - min_k G(u_k)) / h over oscillation sequences.
inline double fit_lsc_ctol(int mesh, int n, std::uint64_t seed, int d = 2) {
    const Domain box = Domain::box(d, {0.0, 0.0}, {1.0, d > 1 ? 1.0 : 0.0});
    Functional F{BulkIntegrand::quadratic(box), SurfaceIntegrand::constant(1.0), box};
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        auto seq = oscillation_sequence(rng, mesh, d);
        double Gu = evaluate_functional(F, seq.limit, box), Gmin = HUGE_VAL;
        for (const auto& uk : seq.terms) Gmin = std::min(Gmin, evaluate_functional(F, uk, box));
        worst = std::max(worst, (Gu - Gmin) * mesh);
    }
    return worst;
}

}  // namespace olab
