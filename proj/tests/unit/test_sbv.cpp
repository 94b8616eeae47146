#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "olab/corpus.hpp"
#include "olab/poincare.hpp"
#include "olab/rearrangement.hpp"

using namespace olab;

namespace {

const Domain kBox = Domain::box(2, {-1.0, -1.0}, {1.0, 1.0});
const Ball kB{{0.0, 0.0}, 1.0, 2};

GridFunction on_box(int n, const std::function<double(const Point&)>& f) { return GridFunction::sample(kBox, n, f); }

std::vector<double> ball_values(const GridFunction& g, const Ball& B) {
    std::vector<double> v;
    for (size_t c = 0; c < g.cells(); ++c)
        if (g.active(c) && B.contains(g.center(c))) v.push_back(g.at(c));
    return v;
}

// Jump facets wherever neighbouring cell values of g differ by more than tol.
JumpSet jumps_where(const GridFunction& g, double tol) {
    std::vector<std::pair<size_t, int>> cand;
    for (size_t c = 0; c < g.cells(); ++c)
        for (int axis = 0; axis < 2; ++axis) {
            int i2 = g.ix(c) + (axis == 0), j2 = g.iy(c) + (axis == 1);
            if (i2 >= g.nx() || j2 >= g.ny()) continue;
            if (std::abs(g.at(g.index(i2, j2)) - g.at(c)) > tol) cand.push_back({c, axis});
        }
    return jumps_from_values(g, cand);
}

}  // namespace

TEST(JumpSet, Invariants) {
    auto g = on_box(8, [](const Point&) { return 0.0; });
    EXPECT_THROW(SbvFunction::build(g, JumpSet({JumpFacet{1, 1, 0, 1, {0.0}, 1.0}})), InvariantError);
    EXPECT_THROW(SbvFunction::build(g, JumpSet({JumpFacet{1, 1, 0, 1, {1.0}, 1.0}, JumpFacet{1, 1, 0, -1, {2.0}, 1.0}})),
                 InvariantError);
    EXPECT_THROW(SbvFunction::build(g, JumpSet({JumpFacet{7, 1, 0, 1, {1.0}, 1.0}})), InvariantError);
    EXPECT_THROW(SbvFunction::build(g, JumpSet({JumpFacet{1, 1, 0, 2, {1.0}, 1.0}})), InvariantError);
    auto u = SbvFunction::build(g, JumpSet({JumpFacet{1, 1, 0, 1, {1.0}, 1.0}, JumpFacet{2, 3, 1, 1, {-1.0}, 0.5}}));
    EXPECT_NEAR(u.jumps().total_measure(u.base()), 0.25 + 0.125, 1e-15);
}

TEST(SbvFunction, GradientNeverCrossesJump) {
    auto g = on_box(16, [](const Point& x) { return x[0] > 0.0 ? 5.0 + x[0] : x[0]; });
    auto u = SbvFunction::build(g, jumps_where(g, 1.0));
    for (size_t c = 0; c < g.cells(); ++c) EXPECT_NEAR(u.gradient().at(c, 0), 1.0, 1e-12);
    auto smooth = SbvFunction::smooth(g);
    EXPECT_GT(smooth.gradient_norm(g.index(7, 3)), 10.0);
}

TEST(SbvFunction, GradientConsistencyHalvesWithMesh) {
    auto err = [](int n) {
        auto u = SbvFunction::smooth(on_box(n, [](const Point& x) { return std::sin(2 * x[0]) * std::cos(x[1]); }));
        double e = 0.0;
        for (size_t c = 0; c < u.base().cells(); ++c) {
            Point x = u.base().center(c);
            e = std::max(e, std::abs(u.gradient().at(c, 0) - 2 * std::cos(2 * x[0]) * std::cos(x[1])));
            e = std::max(e, std::abs(u.gradient().at(c, 1) + std::sin(2 * x[0]) * std::sin(x[1])));
        }
        return e;
    };
    double e1 = err(32), e2 = err(64), e3 = err(128);
    EXPECT_LT(e1, 0.2);
    EXPECT_LT(e2, 0.6 * e1);
    EXPECT_LT(e3, 0.6 * e2);
}

TEST(SbvFunction, JmpRoundTrip) {
    auto g = on_box(12, [](const Point& x) { return x[1] > 0.1 ? 1.0 / 3.0 : 0.0; });
    auto u = SbvFunction::build(g, jumps_where(g, 0.1));
    std::stringstream ss;
    write_jmp(ss, u.base(), u.jumps());
    JumpSet J = read_jmp(ss, g);
    ASSERT_EQ(J.size(), u.jumps().size());
    for (size_t k = 0; k < J.size(); ++k) {
        EXPECT_EQ(J.facets()[k].i, u.jumps().facets()[k].i);
        EXPECT_EQ(J.facets()[k].amp, u.jumps().facets()[k].amp);
    }
    std::istringstream bad("jmp 1 d=1 m=1\n");
    EXPECT_THROW(read_jmp(bad, g), ParseError);
    std::istringstream trunc("jmp 1 d=2 m=1\n1 2 0\n");
    EXPECT_THROW(read_jmp(trunc, g), ParseError);
}

TEST(Distribution, Indicator) {
    auto g = on_box(64, [](const Point& x) { return x[0] > 0.3 ? 1.0 : 0.0; });
    auto nu = distribution_function(g, kB);
    auto v = ball_values(g, kB);
    const double w = g.cell_measure(), M = v.size() * w;
    const double A = std::count(v.begin(), v.end(), 1.0) * w;
    EXPECT_DOUBLE_EQ(nu(-0.5), M);
    EXPECT_DOUBLE_EQ(nu(0.0), A);
    EXPECT_DOUBLE_EQ(nu(0.99), A);
    EXPECT_DOUBLE_EQ(nu(1.0), 0.0);
    EXPECT_DOUBLE_EQ(nu(7.0), 0.0);
    auto r = signed_rearrangement(g, kB);
    EXPECT_EQ(r(0.0), 1.0);
    EXPECT_EQ(r(A - 0.5 * w), 1.0);
    EXPECT_EQ(r(A), 0.0);
    EXPECT_EQ(r(M - 0.5 * w), 0.0);
}

TEST(Distribution, Constant) {
    auto g = on_box(32, [](const Point&) { return 2.5; });
    auto nu = distribution_function(g, kB);
    EXPECT_DOUBLE_EQ(nu(2.4), nu.total_measure());
    EXPECT_DOUBLE_EQ(nu(2.5), 0.0);
    auto r = signed_rearrangement(g, kB);
    for (double s : {0.0, 1.0, 3.0}) EXPECT_EQ(r(s), 2.5);
    EXPECT_EQ(quantile(g, kB, 0.0)[0], 2.5);
    EXPECT_EQ(quantile(g, kB, nu.total_measure())[0], 2.5);
    EXPECT_EQ(median(g, kB)[0], 2.5);
}

TEST(Distribution, RandomMatchesSortingOracle) {
    auto fs = random_grid_functions(kBox, 48, 10, 21);
    for (const auto& g : fs) {
        auto v = ball_values(g, kB);
        std::sort(v.begin(), v.end());
        const double w = g.cell_measure();
        auto nu = distribution_function(g, kB);
        auto r = signed_rearrangement(g, kB);
        for (size_t k = 0; k < v.size(); k += 37) {
            double t = v[k];
            double oracle = static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), t)) * w;
            EXPECT_DOUBLE_EQ(nu(t), oracle);
            // Equimeasurability on the breakpoint grid.
            EXPECT_DOUBLE_EQ(r.distribution(t), nu(t));
            // Weighted-sort quantile with the inf convention.
            double s = static_cast<double>(k + 1) * w;
            EXPECT_EQ(quantile(g, kB, s)[0], v[k]);
            // Profile is the descending sort.
            EXPECT_EQ(r((static_cast<double>(v.size() - 1 - k) + 0.5) * w), v[k]);
        }
    }
}

TEST(Rearrangement, MonotoneCoupling) {
    auto fs = random_grid_functions(kBox, 40, 5, 8);
    for (const auto& g : fs) {
        auto nu = distribution_function(g, kB);
        auto r = signed_rearrangement(g, kB);
        double prev = std::numeric_limits<double>::infinity();
        for (auto [s, val] : r.breakpoints()) {
            EXPECT_LE(val, prev);
            prev = val;
            EXPECT_LE(nu(val), s + 1e-12);
        }
        for (double t : nu.breakpoints()) {
            double s = nu(t);
            if (s < r.measure()) { EXPECT_LE(r(s), t); }
        }
    }
}

TEST(Rearrangement, VectorInputNeedsSelector) {
    GridFunction g(kBox, 8, 2);
    EXPECT_THROW(distribution_function(g, kB), ArgumentError);
    EXPECT_NO_THROW(distribution_function(g, kB, 1));
    EXPECT_THROW(quantile(on_box(8, [](const Point&) { return 0.0; }), kB, -1.0), ArgumentError);
    EXPECT_THROW(quantile(on_box(8, [](const Point&) { return 0.0; }), kB, 100.0), ArgumentError);
}

TEST(Median, StepAndAntisymmetric) {
    auto step = on_box(64, [](const Point& x) { return x[0] > 0.0 ? 1.0 : -1.0; });
    EXPECT_EQ(median(step, kB)[0], -1.0);
    auto odd = on_box(64, [](const Point& x) { return x[0] + 0.3 * x[1] * x[1] * x[0] + 0.1 * x[1]; });
    auto v = ball_values(odd, kB);
    std::sort(v.begin(), v.end());
    double quantum = 0.0;
    for (size_t k = 1; k < v.size(); ++k) quantum = std::max(quantum, v[k] - v[k - 1]);
    EXPECT_LE(std::abs(median(odd, kB)[0]), quantum);
}

TEST(Thresholds, NoJumpsAndConstant) {
    auto g = on_box(32, [](const Point& x) { return x[0] * x[1] + x[1]; });
    auto u = SbvFunction::smooth(g);
    auto th = truncation_thresholds(u, kB, default_gamma_iso(2));
    auto v = ball_values(g, kB);
    EXPECT_EQ(th.lambda, 0.0);
    EXPECT_EQ(th.lower[0], *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(th.upper[0], *std::max_element(v.begin(), v.end()));
    auto c = SbvFunction::smooth(on_box(16, [](const Point&) { return -3.0; }));
    auto tc = truncation_thresholds(c, kB, default_gamma_iso(2));
    EXPECT_EQ(tc.lower[0], -3.0);
    EXPECT_EQ(tc.upper[0], -3.0);
}

TEST(Thresholds, OneFacetMatchesSortingOracle) {
    auto g = on_box(64, [](const Point& x) { return std::sin(3 * x[0]) + x[1]; });
    g.at(g.index(40, 30)) += 2.0;
    auto u = SbvFunction::build(g, JumpSet({JumpFacet{39, 30, 0, 1, {2.0}, 1.0}, JumpFacet{40, 30, 0, 1, {-2.0}, 1.0},
                                            JumpFacet{40, 29, 1, 1, {2.0}, 1.0}, JumpFacet{40, 30, 1, 1, {-2.0}, 1.0}}));
    const double gamma = default_gamma_iso(2), h = 2.0 / 64;
    const double lam = std::pow(2 * gamma * 4 * h, 2.0);
    auto th = truncation_thresholds(u, kB, gamma);
    EXPECT_NEAR(th.lambda, lam, 1e-15);
    auto v = ball_values(g, kB);
    std::sort(v.begin(), v.end());
    const double w = h * h;
    auto inf_quantile = [&](double s) {
        size_t k = static_cast<size_t>(std::ceil(s / w - 1e-9));
        return v[std::max<size_t>(k, 1) - 1];
    };
    EXPECT_EQ(th.lower[0], inf_quantile(lam));
    EXPECT_EQ(th.upper[0], inf_quantile(v.size() * w - lam));
}

TEST(Thresholds, SmallJumpViolation) {
    auto g = on_box(32, [](const Point& x) { return x[0] > 0.0 ? 1.0 : 0.0; });
    auto u = SbvFunction::build(g, jumps_where(g, 0.5));
    try {
        truncation_thresholds(u, kB, default_gamma_iso(2));
        ADD_FAILURE() << "expected a precondition error";
    } catch (const PreconditionError& e) {
        EXPECT_NEAR(e.lhs(), std::pow(2 * default_gamma_iso(2) * 2.0, 2.0), 1e-9);
        EXPECT_GT(e.lhs(), e.rhs());
    }
    EXPECT_THROW(truncate(u, kB), PreconditionError);
}

TEST(Truncate, IdentityCases) {
    auto u = SbvFunction::smooth(on_box(32, [](const Point& x) { return std::exp(x[0]) - x[1]; }));
    auto tr = truncate(u, kB);
    EXPECT_EQ(tr.changed_measure, 0.0);
    EXPECT_EQ(tr.u.base().values(), u.base().values());
    auto c = SbvFunction::smooth(on_box(16, [](const Point&) { return 4.0; }));
    EXPECT_EQ(truncate(c, kB).u.base().values(), c.base().values());
}

TEST(Truncate, SpikeClampedAndIdempotent) {
    auto g = on_box(64, [](const Point& x) { return 0.1 * x[0]; });
    // Tall 2x2 spike bounded by jump facets.
    std::vector<size_t> spike{g.index(32, 32), g.index(33, 32), g.index(32, 33), g.index(33, 33)};
    for (size_t c : spike) g.at(c) += 50.0;
    auto u = SbvFunction::build(g, jumps_where(g, 10.0));
    auto tr = truncate(u, kB);
    // Direct count of the cells that moved.
    long moved = 0;
    for (size_t c = 0; c < g.cells(); ++c) moved += tr.u.base().at(c) != g.at(c);
    EXPECT_DOUBLE_EQ(tr.changed_measure, moved * g.cell_measure());
    EXPECT_LE(tr.changed_measure, tr.bound);
    for (size_t c : spike) EXPECT_EQ(tr.u.base().at(c), tr.thresholds.upper[0]);
    EXPECT_LT(tr.thresholds.upper[0], 1.0);
    auto again = truncate(tr.u, kB);
    EXPECT_EQ(again.u.base().values(), tr.u.base().values());
}

TEST(Truncate, CorpusBound) {
    for (const auto& u : generate_corpus(CorpusKind::Jumpy, 20, 48, 17)) {
        Ball B = u.base().domain().as_ball();
        auto tr = truncate(u, B);
        EXPECT_LE(tr.changed_measure, tr.bound * (1 + 1e-12));
        EXPECT_EQ(truncate(tr.u, B).u.base().values(), tr.u.base().values());
    }
}

TEST(PhiTruncate, RadiusAndBound) {
    const Ball Bh{{0.0, 0.0}, 0.5, 2};
    auto sq = PhiFunction::power(kBox, 2.0);
    auto c = SbvFunction::smooth(on_box(32, [](const Point&) { return 1.5; }));
    auto pc = phi_truncate(sq, c, Bh, default_gamma_iso(2));
    EXPECT_NEAR(pc.radius, 0.5, 1e-9);
    EXPECT_EQ(pc.u.base().values(), c.base().values());

    auto wide = SbvFunction::smooth(on_box(64, [](const Point& x) { return 10.0 * x[0]; }));
    auto pw = phi_truncate(sq, wide, Bh, default_gamma_iso(2));
    double worst = 0.0;
    for (size_t cell = 0; cell < pw.u.base().cells(); ++cell) {
        if (!Bh.contains(pw.u.base().center(cell))) continue;
        worst = std::max(worst, std::abs(pw.u.base().at(cell) - pw.median[0]));
    }
    EXPECT_LE(worst, pw.radius * (1 + 1e-9));
    EXPECT_NEAR(worst, pw.radius, 1e-9);
}

TEST(ProfileSurrogate, CorpusContinuousAndInequality) {
    auto psi = [](double t) { return t * t; };
    for (const auto& u : generate_corpus(CorpusKind::Jumpy, 10, 48, 23)) {
        auto ps = profile_surrogate(u, u.base().domain().as_ball(), psi, default_gamma_iso(2));
        EXPECT_TRUE(ps.continuous) << ps.max_gap << " vs " << ps.cell_quantum;
        EXPECT_TRUE(ps.inequality) << ps.lhs << " vs " << ps.rhs;
    }
}
