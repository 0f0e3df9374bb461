#include "support.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

using namespace uavh;

TEST(Numeric, ErfcxMatchesDirectFormWhereBothAreRepresentable) {
    for (double x : {-2.0, 0.0, 0.5, 3.0, 10.0, 25.9})
        EXPECT_NEAR(numeric::erfcx(x), std::exp(x * x) * std::erfc(x), 1e-13 * std::exp(x * x) * std::erfc(x));
}

TEST(Numeric, ErfcxAsymptoticBranchIsContinuous) {
    const double below = numeric::erfcx(std::nextafter(26.0, 0.0));
    const double above = numeric::erfcx(26.0);
    EXPECT_NEAR(below, above, 1e-12 * above);
    // 1 / (x sqrt(pi)) leading term
    EXPECT_NEAR(numeric::erfcx(1e6), 1.0 / (1e6 * std::sqrt(M_PI)), 1e-12 / 1e6);
}

TEST(Numeric, ScaledErfcAvoidsUnderflow) {
    // erfc(40) underflows to ~1e-697; scaling by exp(1600) brings it back
    const double v = numeric::scaled_erfc(40.0, 1600.0);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, numeric::erfcx(40.0), 1e-12 * v);
}

TEST(Numeric, NormalIntervalAgreesWithCdfDifference) {
    gen::Gen g(11);
    for (int i = 0; i < 200; ++i) {
        const double a = g.uniform(-6.0, 6.0), b = g.uniform(-6.0, 6.0);
        const double lo = std::min(a, b), hi = std::max(a, b);
        EXPECT_NEAR(numeric::normal_interval(lo, hi), numeric::normal_cdf(hi) - numeric::normal_cdf(lo), 1e-15);
    }
    EXPECT_EQ(numeric::normal_interval(1.0, 1.0), 0.0);
    EXPECT_EQ(numeric::normal_interval(2.0, 1.0), 0.0);
}

TEST(Numeric, NormalIntervalKeepsFarTailPrecision) {
    // Phi(-30) - Phi(-31) is about 5e-198; the cdf difference would lose it
    const double v = numeric::normal_interval(30.0, 31.0);
    const double expected = 0.5 * (std::erfc(30.0 / std::sqrt(2.0)) - std::erfc(31.0 / std::sqrt(2.0)));
    EXPECT_NEAR(v, expected, 1e-12 * expected);
    EXPECT_GT(v, 0.0);
}

TEST(Numeric, LowerGammaDiffMatchesBoostOnBothTails) {
    for (double s : {0.5, 1.0, 1.5, 2.5, 7.0})
        for (double lo : {0.0, 0.1, 2.0, 30.0}) {
            const double hi = lo + 1.5;
            const double expected = boost::math::tgamma_lower(s, hi) - (lo > 0 ? boost::math::tgamma_lower(s, lo) : 0.0);
            EXPECT_NEAR(numeric::lower_gamma_diff(s, lo, hi), expected, 1e-12 * std::max(1.0, std::abs(expected)));
        }
    EXPECT_EQ(numeric::lower_gamma_diff(2.0, 3.0, 1.0), 0.0);
}

TEST(Numeric, IntegrateAgreesWithSimpsonOracle) {
    auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x) + x * x; };
    EXPECT_NEAR(numeric::integrate(f, 0.0, 4.0), oracle::simpson(f, 0.0, 4.0, 200000), 1e-9);
}

TEST(Numeric, IntegrateRejectsUnresolvableIntegrand) {
    // a jump that the bisection depth cannot isolate to 1e-15
    auto f = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
    EXPECT_THROW(numeric::integrate(f, 0.0, 1.0, {1e-15, 1e-15, 4}), ConvergenceError);
}

TEST(Numeric, IntegratePiecesSumsIntervals) {
    auto f = [](double x) { return std::abs(x - 1.0); };
    EXPECT_NEAR(numeric::integrate_pieces(f, {0.0, 1.0, 3.0}), 0.5 + 2.0, 1e-12);
}

TEST(Numeric, GaussLegendrePanelsIntegratePolynomialsExactly) {
    // degree 19 is exact for the 10-point rule
    auto p = [](double x) { return std::pow(x, 19) - 3.0 * std::pow(x, 7) + 1.0; };
    for (std::size_t panels : {1u, 3u, 10u}) {
        double sum = 0.0;
        for (const auto& n : numeric::gauss_legendre_panels(-1.0, 2.0, panels)) sum += n.w * p(n.x);
        const double exact = (std::pow(2.0, 20) - 1.0) / 20.0 - 3.0 * (std::pow(2.0, 8) - 1.0) / 8.0 + 3.0;
        EXPECT_NEAR(sum, exact, 1e-9 * exact);
    }
}

TEST(Numeric, Clamp01) {
    EXPECT_EQ(numeric::clamp01(-0.1), 0.0);
    EXPECT_EQ(numeric::clamp01(1.5), 1.0);
    EXPECT_EQ(numeric::clamp01(0.25), 0.25);
}
