// Pilot calibration of the frozen constants in olab/config.hpp.
#include <iostream>

#include <CLI11.hpp>

#include "olab/calibration.hpp"
#include "olab/catalog.hpp"
#include "olab/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"olab pilot calibration"};
    std::uint64_t seed = 1;
    int n = 50, mesh = 64;
    app.add_option("--seed", seed, "pilot seed");
    app.add_option("--n", n, "pilot corpus size");
    app.add_option("--mesh", mesh, "pilot mesh");
    CLI11_PARSE(app, argc, argv);

    using namespace olab;
    const Domain D = Domain::unit_ball(2);
    const Ball B{{0.0, 0.0}, 1.0, 2};
    json out;
    out["pilot"] = {{"seed", seed}, {"n", n}, {"mesh", mesh}, {"margin", kSafetyMargin}};

    auto jumpy = generate_corpus(CorpusKind::Jumpy, n, mesh, seed);
    auto sq = PhiFunction::power(D, 2.0);
    auto pf = fit_poincare_constants(sq, jumpy, B);
    out["poincare_t2"] = {{"inverse", pf.inverse}, {"homogeneous", pf.homogeneous}};
    auto lin = fit_poincare_constants(PhiFunction::power(D, 1.0), jumpy, B);
    out["poincare_t1"] = {{"inverse", lin.inverse}, {"homogeneous", lin.homogeneous}};

    auto dp = detail::catalog_compliant(3, CatalogSettings{});
    auto gate = generalized_gate(dp, B);
    auto gf = fit_generalized_constants(gate, dp, jumpy);
    out["generalized_double_phase"] = {{"P1", gf.p1}, {"P2", gf.p2}, {"sigma", gate.sigma}, {"beta", gate.beta}};

    auto fs = random_grid_functions(D, mesh, n, seed);
    out["maximal_c1_gamma2"] = fit_maximal_c1(fs, 2.0);

    out["hardy_c1_t2_d2"] = fit_hardy_c1(sq, hardy_profiles(mesh, n, seed), 2);
    out["lsc_ctol"] = fit_lsc_ctol(mesh, n, seed);

    std::cout << out.dump(2) << '\n';
    return 0;
}
