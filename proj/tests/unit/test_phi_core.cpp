#include <gtest/gtest.h>

#include <cmath>

#include "olab/catalog.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"

using namespace olab;

namespace {

const Domain kBall = Domain::unit_ball(2);

std::vector<double> sample_ts(double a, double b, int n) {
    std::vector<double> ts;
    for (int k = 0; k < n; ++k) ts.push_back(a * std::pow(b / a, static_cast<double>(k) / (n - 1)));
    return ts;
}

}  // namespace

TEST(Evaluate, DoublePhaseWithZeroWeightIsPower) {
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, SpatialField::constant(0.0));
    EXPECT_DOUBLE_EQ(evaluate(phi, {0.3, -0.2}, 3.0), 9.0);
}

TEST(Evaluate, DoublePhaseWithRadialWeight) {
    auto a = SpatialField::function([](const Point& x) { return std::hypot(x[0], x[1]); }, "|x|");
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, a);
    EXPECT_NEAR(evaluate(phi, {0.3, 0.4}, 2.0), 8.0, 1e-12);
}

TEST(Evaluate, ZeroAtZeroForEveryFamily) {
    auto a = fields::holder({0.0, 0.0}, 0.5, 1.0, 2);
    std::vector<PhiFunction> all{
        PhiFunction::variable_exponent(kBall, fields::sin2(2.0, 1.0, 0)),
        PhiFunction::perturbed_orlicz(kBall, fields::affine(1.0, 0.5, 0), 2.0, 1.0),
        PhiFunction::double_phase(kBall, 2.0, 3.0, a),
        PhiFunction::degenerate_double_phase(kBall, 2.0, a),
        PhiFunction::triple_phase(kBall, 2.0, 3.0, 4.0, a, a),
        PhiFunction::variable_exponent_double_phase(kBall, SpatialField::constant(2.0), SpatialField::constant(3.0), a),
        PhiFunction::custom(kBall, [](const Point&, double t) { return std::expm1(t); }, true),
    };
    for (const auto& phi : all) EXPECT_EQ(evaluate(phi, {0.1, 0.1}, 0.0), 0.0) << phi.label();
}

TEST(Evaluate, Errors) {
    auto phi = PhiFunction::power(kBall, 2.0);
    EXPECT_THROW(evaluate(phi, {2.0, 0.0}, 1.0), DomainError);
    EXPECT_THROW(evaluate(phi, {0.0, 0.0}, -1.0), ArgumentError);
}

TEST(LeftInverse, Examples) {
    auto sq = PhiFunction::power(kBall, 2.0);
    EXPECT_NEAR(left_inverse(sq, {0, 0}, 4.0), 2.0, 2.0 * kTolInv * 4);
    EXPECT_EQ(left_inverse(sq, {0, 0}, 0.0), 0.0);
    auto step = PhiFunction::custom(kBall, [](const Point&, double t) { return t < 1.0 ? 0.0 : 1.0; }, true);
    EXPECT_NEAR(left_inverse(step, {0, 0}, 0.5), 1.0, 1e-9);
}

TEST(LeftInverse, IsLeftInverseOnSamples) {
    auto phi = PhiFunction::perturbed_orlicz(kBall, SpatialField::constant(1.0), 1.5, 1.0);
    for (double s : sample_ts(1e-6, 1e6, 40)) {
        double t = left_inverse(phi, {0, 0}, s);
        EXPECT_GE(phi({0, 0}, t), s * (1 - 1e-12));
        EXPECT_LT(phi({0, 0}, t * (1 - 1e-9)), s);
    }
}

TEST(BallBounds, ConstantInX) {
    auto phi = PhiFunction::power(kBall, 3.0);
    auto b = phi_bounds_on_ball(phi, Ball{{0.2, 0.1}, 0.3, 2}, 1.7);
    EXPECT_DOUBLE_EQ(b.lower, std::pow(1.7, 3.0));
    EXPECT_DOUBLE_EQ(b.upper, std::pow(1.7, 3.0));
}

TEST(BallBounds, DoublePhaseRadialWeight) {
    auto a = SpatialField::function([](const Point& x) { return std::hypot(x[0], x[1]); }, "|x|");
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, a);
    auto b = phi_bounds_on_ball(phi, Ball{{0.0, 0.0}, 0.1, 2}, 1.0);
    EXPECT_DOUBLE_EQ(b.lower, 1.0);
    EXPECT_NEAR(b.upper, 1.1, 1e-12);
}

TEST(BallBounds, VariableExponentMatchesDenseOracle) {
    auto p = SpatialField::function([](const Point& x) { return 2.0 + x[0]; }, "2+x1");
    auto phi = PhiFunction::variable_exponent(kBall, p);
    const Ball B{{0.0, 0.0}, 0.1, 2};
    // Dense oracle: min/max over a 401^2 lattice restricted to B.
    double lo = HUGE_VAL, hi = 0.0;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            double x = -0.1 + 0.2 * i / 400.0, y = -0.1 + 0.2 * j / 400.0;
            if (x * x + y * y > 0.01 * (1 + 1e-12)) continue;
            double v = std::pow(2.0, 2.0 + x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    EXPECT_NEAR(lo, std::pow(2.0, 1.9), 1e-12);
    EXPECT_NEAR(hi, std::pow(2.0, 2.1), 1e-12);
    auto b = phi_bounds_on_ball(phi, B, 2.0);
    EXPECT_NEAR(b.lower, lo, 1e-3 * lo);
    EXPECT_NEAR(b.upper, hi, 1e-3 * hi);
    EXPECT_LE(b.lower, b.upper);
}

TEST(CheckInc, PowerFunctions) {
    auto sq = PhiFunction::power(kBall, 2.0);
    auto r = check_inc(sq, 2.0, false);
    ASSERT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.constants.at("a"), 1.0);
    auto f = check_inc(sq, 3.0, false);
    EXPECT_FALSE(f.holds);
    EXPECT_TRUE(f.witness.has_value());
    EXPECT_TRUE(f.constants.empty());

    auto lin = PhiFunction::power(kBall, 1.0);
    EXPECT_TRUE(check_inc(lin, 1.0, false).holds);
    EXPECT_FALSE(check_inc(lin, 1.5, false).holds);
}

TEST(CheckInc, DoublePhaseAlmostInc2) {
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, fields::holder({0, 0}, 0.5, 1.0, 2));
    EXPECT_TRUE(check_inc(phi, 2.0, true).holds);
}

TEST(CheckDec, PowerFunctions) {
    auto sq = PhiFunction::power(kBall, 2.0);
    EXPECT_TRUE(check_dec(sq, 2.0, false).holds);
    EXPECT_FALSE(check_dec(sq, 1.5, false).holds);
}

TEST(CheckDec, TriplePhaseAlmostDecR) {
    auto a = fields::holder({0, 0}, 0.5, 1.0, 2);
    auto phi = PhiFunction::triple_phase(kBall, 2.0, 3.0, 4.0, a, a);
    EXPECT_TRUE(check_dec(phi, 4.0, true).holds);
}

TEST(CheckDec, TLogMatchesRatioOracle) {
    auto phi = PhiFunction::perturbed_orlicz(kBall, SpatialField::constant(1.0), 1.0, 1.0);
    // Oracle: sup over sampled s < t of g(s)/g(t) with g = phi/t^2; g is strictly decreasing here.
    auto ts = sample_ts(1e-4, 1e4, 512);
    double a = 1.0, gmin_after = HUGE_VAL;
    for (size_t k = ts.size(); k-- > 0;) {
        double g = ts[k] * std::log(std::exp(1.0) + ts[k]) / (ts[k] * ts[k]);
        if (gmin_after < HUGE_VAL) a = std::max(a, gmin_after / g);
        gmin_after = std::min(gmin_after, g);
    }
    auto r = check_dec(phi, 2.0, true);
    ASSERT_TRUE(r.holds);
    EXPECT_NEAR(r.constants.at("a"), a, 1e-12);
    EXPECT_DOUBLE_EQ(r.constants.at("a"), 1.0);
}

TEST(Doubling, PowerIsTwoToP) {
    for (double p : {1.0, 2.0, 3.5}) {
        auto r = doubling_constant(PhiFunction::power(kBall, p));
        ASSERT_TRUE(r.holds);
        EXPECT_NEAR(r.constants.at("K"), std::pow(2.0, p), 1e-9);
    }
}

TEST(Doubling, DoublePhaseMatchesSampledSup) {
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, SpatialField::constant(1.0));
    double K = 0.0;
    for (double t : sample_ts(1e-4, 1e4, 512))
        K = std::max(K, (4 * t * t + 8 * t * t * t) / (t * t + t * t * t));
    auto r = doubling_constant(phi);
    ASSERT_TRUE(r.holds);
    EXPECT_NEAR(r.constants.at("K"), K, 1e-12 * K);
    EXPECT_LE(r.constants.at("K"), 8.0);
    EXPECT_GT(r.constants.at("K"), 7.99);
}

TEST(Doubling, ExponentialFails) {
    auto phi = PhiFunction::custom(kBall, [](const Point&, double t) { return std::expm1(t); }, true);
    auto r = doubling_constant(phi);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
}

TEST(Doubling, ImpliesAlmostDecAtLog2K) {
    auto a = fields::holder({0, 0}, 0.5, 1.0, 2);
    std::vector<PhiFunction> cases{PhiFunction::double_phase(kBall, 2.0, 3.0, a),
                                   PhiFunction::perturbed_orlicz(kBall, SpatialField::constant(1.0), 1.5, 2.0),
                                   PhiFunction::triple_phase(kBall, 1.5, 2.5, 3.0, a, a)};
    for (const auto& phi : cases) {
        auto K = doubling_constant(phi);
        ASSERT_TRUE(K.holds);
        EXPECT_TRUE(check_dec(phi, std::log2(K.constants.at("K")), true).holds) << phi.label();
    }
}

TEST(CheckA0, VariableExponentHasSigmaOne) {
    auto phi = PhiFunction::variable_exponent(kBall, fields::sin2(2.0, 1.0, 0));
    auto r = check_A0(phi);
    ASSERT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.constants.at("sigma"), 1.0);
}

TEST(CheckA0, BoundedWeightHolds) {
    auto phi = PhiFunction::perturbed_orlicz(kBall, fields::affine(1.0, 0.5, 0), 2.0, 1.0);
    EXPECT_TRUE(check_A0(phi).holds);
}

TEST(CheckA0, UnboundedWeightFailsWithWitness) {
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, fields::singular({0, 0}, 0.5, 1.0, 2)).with_focus({{0, 0}});
    auto r = check_A0(phi);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_LT(std::hypot(r.witness->x[0], r.witness->x[1]), 1e-3);
}

TEST(CheckAdA1, ConstantInXGivesBetaNearOne) {
    auto phi = PhiFunction::power(kBall, 2.0);
    auto r = check_adA1(phi, adA1_test_balls(phi, kBall));
    ASSERT_TRUE(r.holds);
    EXPECT_GT(r.constants.at("beta"), 0.85);
}

TEST(CheckAdA1, HolderDoublePhaseHolds) {
    auto phi = detail::catalog_compliant(3, CatalogSettings{});
    EXPECT_TRUE(check_adA1(phi, adA1_test_balls(phi, kBall)).holds);
}

TEST(CheckAdA1, NonLogHolderExponentFailsAtSmallBalls) {
    auto phi = PhiFunction::variable_exponent(kBall, fields::loglog({0, 0}, 2.0, 1.0, 2)).with_focus({{0, 0}});
    auto r = check_adA1(phi, adA1_test_balls(phi, kBall));
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness && r.witness->ball);
    EXPECT_LT(r.witness->ball->radius, 1e-8);
}

TEST(CheckAdA1, Preconditions) {
    auto phi = PhiFunction::power(kBall, 2.0);
    EXPECT_THROW(check_adA1(phi, {Ball{{0, 0}, 0.9, 2}}), ArgumentError);
    auto bad = PhiFunction::double_phase(kBall, 2.0, 3.0, fields::singular({0, 0}, 0.5, 1.0, 2)).with_focus({{0, 0}});
    EXPECT_THROW(check_adA1(bad, {Ball{{0, 0}, 0.25, 2}}), PreconditionError);
}

TEST(LocalComparability, ContinuousHoldsWithTwo) {
    auto phi = detail::catalog_compliant(3, CatalogSettings{});
    double sigma = check_A0(phi).constants.at("sigma");
    auto r = check_local_comparability(phi, {0.2, 0.1}, 4 * sigma);
    ASSERT_TRUE(r.holds);
    EXPECT_LE(r.constants.at("C"), 2.0);
}

TEST(LocalComparability, NonLogHolderExponentStillHolds) {
    auto phi = PhiFunction::variable_exponent(kBall, fields::loglog({0, 0}, 2.0, 1.0, 2)).with_focus({{0, 0}});
    EXPECT_TRUE(check_local_comparability(phi, {0, 0}, 4.0).holds);
}

TEST(LocalComparability, StepWeightFailsAtJump) {
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, fields::step({0, 0}, 0, 0.0, 1.0)).with_focus({{0, 0}});
    double sigma = check_A0(phi).constants.at("sigma");
    auto r = check_local_comparability(phi, {0, 0}, 4 * sigma);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    // Oracle: across the jump phi+/phi- = (t^2 + t^3)/t^2 = 1 + t, maximal at theta.
    EXPECT_NEAR(r.witness->value, 1.0 + 4 * sigma, 1e-9 * (1.0 + 4 * sigma));
}

TEST(Equivalence, Examples) {
    auto sq = PhiFunction::power(kBall, 2.0);
    auto r = check_equivalence(sq, sq);
    ASSERT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.constants.at("L"), 1.0);

    auto four = PhiFunction::double_phase(kBall, 2.0, 2.0, SpatialField::constant(3.0));
    auto r2 = check_equivalence(sq, four);
    ASSERT_TRUE(r2.holds);
    EXPECT_NEAR(r2.constants.at("L"), 2.0, 1e-8);

    auto r3 = check_equivalence(sq, PhiFunction::power(kBall, 3.0));
    EXPECT_FALSE(r3.holds);
    ASSERT_TRUE(r3.witness.has_value());
    EXPECT_GT(r3.witness->t, 1.0);

    auto tlog = PhiFunction::perturbed_orlicz(kBall, SpatialField::constant(1.0), 2.0, 1.0);
    EXPECT_FALSE(check_equivalence(sq, tlog).holds);
}

TEST(Equivalence, TransfersAlmostIncConstant) {
    const double p = 1.5;
    auto phi = PhiFunction::double_phase(kBall, 2.0, 3.0, SpatialField::constant(1.0));
    auto psi = PhiFunction::double_phase(kBall, 2.0, 3.0, SpatialField::constant(5.0));
    auto eq = check_equivalence(phi, psi);
    ASSERT_TRUE(eq.holds);
    auto inc_phi = check_inc(phi, p, true);
    auto inc_psi = check_inc(psi, p, true);
    ASSERT_TRUE(inc_phi.holds);
    ASSERT_TRUE(inc_psi.holds);
    EXPECT_LE(inc_psi.constants.at("a"), inc_phi.constants.at("a") * std::pow(eq.constants.at("L"), 2 * p));
}

TEST(Conjugate, Examples) {
    auto lin = poincare_conjugate(PhiFunction::power(kBall, 1.0), 2);
    auto sq = poincare_conjugate(PhiFunction::power(kBall, 2.0), 2);
    auto p3 = poincare_conjugate(PhiFunction::power(kBall, 1.7), 2);
    for (double t : {0.0, 0.5, 1.0, 3.0}) {
        EXPECT_NEAR(lin({0, 0}, t), t, 1e-12 * (1 + t));
        EXPECT_NEAR(sq({0, 0}, t), t * t * t, 1e-12 * (1 + t * t * t));
        EXPECT_NEAR(p3({0, 0}, t), std::pow(t, 2 * 1.7 - 1), 1e-12 * (1 + t * t * t));
    }
    EXPECT_THROW(poincare_conjugate(PhiFunction::power(kBall, 2.0), 1), ArgumentError);
}

TEST(Prefunction, CatalogInstancesAreMonotone) {
    for (int f = 1; f <= 6; ++f) {
        auto phi = detail::catalog_compliant(f, CatalogSettings{});
        EXPECT_TRUE(check_prefunction(phi).holds) << phi.label();
    }
}

TEST(Implication, AdA1GivesComparabilityWithBoundedConstant) {
    for (int f : {1, 3, 5, 6}) {
        auto phi = detail::catalog_compliant(f, CatalogSettings{});
        auto ad = check_adA1(phi, adA1_test_balls(phi, kBall));
        ASSERT_TRUE(ad.holds) << phi.label();
        auto K = doubling_constant(phi);
        ASSERT_TRUE(K.holds);
        double bound = std::pow(K.constants.at("K"), 1.0 - std::log2(ad.constants.at("beta")));
        auto r = check_local_comparability(phi, {0.1, -0.2}, 4 * ad.constants.at("sigma"), {}, bound);
        ASSERT_TRUE(r.holds) << phi.label();
        EXPECT_LE(r.constants.at("C"), bound);
    }
}
