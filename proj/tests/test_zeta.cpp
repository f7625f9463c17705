#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "x1/hyperbolic_zeta.hpp"
#include "x1/numeric.hpp"
#include "x1/scattering.hpp"

using namespace x1;

TEST(Numeric, RiemannAndHurwitzZeta)
{
    EXPECT_NEAR(riemann_zeta(2).real(), M_PI * M_PI / 6, 1e-13);
    EXPECT_NEAR(riemann_zeta(0).real(), -0.5, 1e-13);
    EXPECT_NEAR(riemann_zeta(-1).real(), -1.0 / 12, 1e-13);
    // zeta(1/2 + 14.134725141734693 i) is a zero
    EXPECT_LT(std::abs(riemann_zeta(cplx(0.5, 14.134725141734693))), 1e-9);
    EXPECT_NEAR(hurwitz_zeta(2, 0.5).real(), M_PI * M_PI / 2, 1e-12);
}

TEST(Numeric, GammaAndErfcx)
{
    EXPECT_NEAR(gamma_c(5).real(), 24, 1e-12);
    EXPECT_NEAR(gamma_c(0.5).real(), std::sqrt(M_PI), 1e-13);
    EXPECT_LT(std::abs(gamma_c(cplx(0.3, 2)) * rgamma_c(cplx(0.3, 2)) - 1.0), 1e-13);
    for (double x : {-2.0, 0.0, 0.5, 3.0, 10.0})
        EXPECT_NEAR(erfcx(x) / (std::exp(x * x) * std::erfc(x)), 1, 1e-11) << x;
    // asymptotic series where exp(x^2) overflows
    const double x = 30;
    EXPECT_NEAR(erfcx(x) * x * std::sqrt(M_PI), 1 - 1 / (2 * x * x) + 3 / (4 * std::pow(x, 4)), 1e-8);
}

TEST(Zeta, ConeSumsMatchDirectEnumeration)
{
    ZetaFunction z(5, 7, 1);
    ASSERT_EQ(z.regions().size(), 12u);
    for (size_t j = 0; j < z.regions().size(); j += 3) {
        const RegionSpec& r = z.regions()[j];
        double want = oracle::cone_sum(r.A, r.B, r.C, r.level, r.u, r.e_num, r.e_den, 3.0, 2e7);
        double got = region_zeta_direct(r, 3.0).value.real();
        EXPECT_NEAR(got / want, 1, 1e-10) << j;
    }
}

TEST(Zeta, RegionPointsAreInTheCone)
{
    ZetaFunction z(7, 9, 1);
    const RegionSpec& r = z.regions()[0];
    auto pts = region_points(r, 5000);
    EXPECT_FALSE(pts.empty());
    for (auto [m, n] : pts) {
        EXPECT_TRUE(in_region(r, m, n));
        EXPECT_LE(region_value(r, m, n), 5000);
        EXPECT_GT(region_value(r, m, n), 0);
    }
}

TEST(Zeta, ResidueThreeWays)
{
    ZetaFunction z(5, 7, 1);
    auto closed = z.class_residues();
    ASSERT_EQ(closed.size(), 6u);
    double total = 0;
    for (size_t i = 0; i < closed.size(); ++i) {
        total += closed[i];
        double fit = theta_expansion_fit(z.regions()[2 * i], 4, default_theta_grid()).beta(-2) +
                     theta_expansion_fit(z.regions()[2 * i + 1], 4, default_theta_grid()).beta(-2);
        EXPECT_NEAR(fit / closed[i], 1, 1e-5) << i;
    }
    EXPECT_NEAR(total, static_cast<double>(z.residue_closed()), 1e-14);
    EXPECT_NEAR(z.residue_extrapolated(0) / closed[0], 1, 1e-5);
}

TEST(Zeta, ContinuationMatchesDirectSum)
{
    ZetaFunction z(5, 7, 1);
    for (cplx s : {cplx(2.5, 0), cplx(1.3, 2), cplx(1.8, -5)}) {
        cplx d = z.direct(s).value;
        cplx c = z.continued(s).value;
        EXPECT_LT(std::abs(d - c), 1e-8) << s;
    }
    cplx inside = z.continued(0.75).value;
    EXPECT_TRUE(std::isfinite(inside.real()) && std::isfinite(inside.imag()));
}

TEST(Zeta, MoebiusFactorSeries)
{
    // sum over d = 1 mod 1 is 1/zeta(2s)
    CuValue v = cu(1, 0, 2.0);
    EXPECT_NEAR(v.value.real(), 90 / std::pow(M_PI, 4), 1e-6);
    // the residue classes mod N split 1/zeta(2s) times the missing Euler factors
    cplx sum = 0;
    for (i64 u = 1; u < 5; ++u)
        sum += cu(5, u, 2.0).value;
    EXPECT_NEAR(sum.real(), 90 / std::pow(M_PI, 4) / (1 - std::pow(5.0, -4)), 1e-6);
}

TEST(Zeta, WeightedResidueUsesVolume)
{
    PrecisionScope scope(40);
    HP w = weighted_residue(5, 7);
    ZetaFunction z(5, 7, 1);
    // (2 / (pi v_N)) sum log eps / sqrt D = (N^2 / (pi v_N)) residue_closed
    HP want = 25 * z.residue_closed() / (hp_pi() * v_N(5));
    EXPECT_LT(abs(w - want), HP("1e-30"));
}
