#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "x1/error.hpp"
#include "x1/hyperbolic_zeta.hpp"
#include "x1/trace_selberg.hpp"

using namespace x1;

TEST(Trace, HeatKernelIntegralTwoWays)
{
    for (double t : {0.01, 0.5, 1.0, 5.0, 10.0, 40.0})
        for (double w : {0.0, 0.3, 1.0, 4.0, 9.0})
            EXPECT_NEAR(g_integral(t, w), g_integral_quadrature(t, w), 1e-12) << t << " " << w;
    EXPECT_NEAR(g_integral(INFINITY, 2.0), std::exp(-1.0), 1e-15);
}

TEST(Trace, OscillatoryTermAndA_l)
{
    for (double n : {6.85, 11.9, 40.0})
        for (double t : {1.0, 5.0, 10.0}) {
            double a = A_l(n, t);
            EXPECT_NEAR(a, -M_PI / (2 * n) + oscillatory_term(n, t), 1e-10);
            EXPECT_NEAR(a, -M_PI / 2 * g_integral(t, 2 * std::log(n)), 1e-10);
            EXPECT_LE(std::abs(a), A_l_bound(n, t) * (1 + 1e-12));
        }
    // small t limit of the oscillatory term is pi / (2 n)
    EXPECT_NEAR(oscillatory_term(7.0, 1e-3), M_PI / 14, 1e-8);
}

TEST(Trace, ClassNumberRegulatorMatchesDirichletFormula)
{
    for (i64 D : {5, 8, 12, 13, 20, 21, 28, 45, 60, 77, 96, 140, 221, 325})
        EXPECT_NEAR(class_number_regulator(D), oracle::sqrtD_L1(D), 1e-9) << D;
}

TEST(Trace, WeightsAgreeWithZetaResiduesAndBounds)
{
    TraceSpectrum sp(5, 42);
    ZetaFunction z(5, 7, 1);
    double sum = 0;
    for (double r : z.class_residues())
        sum += r;
    auto terms = sp.terms(42);
    bool seen = false;
    for (const TraceTerm& t : terms) {
        EXPECT_LE(t.weight, t.weight_bound) << t.l;
        EXPECT_EQ(((t.l - 2) % 5 + 5) % 5, 0);
        if (t.l == 7) {
            seen = true;
            EXPECT_NEAR(t.weight, 25 * sum, 1e-12);
        }
    }
    EXPECT_TRUE(seen);
    EXPECT_THROW(sp.terms(200), Error);
}

TEST(Trace, ThetaTruncationWithinBound)
{
    TraceSpectrum sp(5, 84);
    for (double t : {1.0, 5.0}) {
        TracePoint a = theta_trace(sp, t, 42);
        TracePoint b = theta_trace(sp, t, 84);
        EXPECT_LE(std::abs(a.theta - b.theta), a.tail_bound_pointwise) << t;
    }
    EXPECT_NEAR(theta_trace(sp, 1.0, 84).theta, 0.1818, 5e-4);
}

TEST(Trace, RHTwoPaths)
{
    TraceSpectrum sp(5);
    for (double t : {1.0, 5.0}) {
        RHValue r = RH_at_1(sp, t, default_l_max(5));
        EXPECT_TRUE(r.agree) << t;
        EXPECT_LT(std::abs(r.difference), 1e-6);
        EXPECT_LT(r.value, 0);
    }
}

TEST(Trace, SiegelSumGrowsRoughlyLinearly)
{
    SiegelSlope s = siegel_slope(3000, 8);
    EXPECT_TRUE(s.monotone);
    EXPECT_GT(s.exponent, 0.7);
    EXPECT_LT(s.exponent, 1.3);
    EXPECT_THROW(siegel_slope(10), Error);
}
