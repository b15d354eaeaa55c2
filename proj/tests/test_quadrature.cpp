#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "floquet_ef/quadrature.hpp"

using namespace floquet_ef;

TEST(Quadrature, GregoryWeightsIntegratePolynomialsExactly) {
    // Corrected trapezoid on [0, 1] with n intervals integrates degree <= 5 exactly.
    const long n = 40;
    const double h = 1.0 / n;
    for (int deg = 0; deg <= 5; ++deg) {
        double s = 0.0;
        for (long k = 0; k <= n; ++k) s += detail::gregory_weight(k, n) * std::pow(k * h, deg);
        EXPECT_NEAR(s * h, 1.0 / (deg + 1), 1e-13) << "degree " << deg;
    }
}

TEST(Quadrature, GregoryWeightsAreSymmetric) {
    const long n = 30;
    for (long k = 0; k <= n; ++k) EXPECT_DOUBLE_EQ(detail::gregory_weight(k, n), detail::gregory_weight(n - k, n));
    EXPECT_DOUBLE_EQ(detail::gregory_weight(15, n), 1.0);
}

TEST(Quadrature, LorentzianNormalization) {
    auto f = [](double e) { return 0.5 / PI / ((e - 0.3) * (e - 0.3) + 0.25); };
    const auto res = integrate_real_line<double>(f, 12.0, 0.05);
    EXPECT_NEAR(res.value, 1.0, 1e-10);
    EXPECT_LE(res.error, 1e-8);
}

TEST(Quadrature, OddIntegrandVanishes) {
    auto f = [](double e) { return e / (1.0 + e * e) / (1.0 + e * e); };
    const auto res = integrate_real_line<double>(f, 10.0, 0.05);
    EXPECT_NEAR(res.value, 0.0, 1e-14);
}

TEST(Quadrature, FermiLorentzianAgainstAdaptiveOracle) {
    const double kT = 0.5, e0 = 0.7;
    auto f = [&](double e) { return 1.0 / (std::exp((e - 0.2) / kT) + 1.0) / ((e - e0) * (e - e0) + 0.25); };
    const auto res = integrate_real_line<double>(f, 15.0, 0.05);
    const double lo = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, -std::numeric_limits<double>::infinity(), 0.0, 15, 1e-14);
    const double hi = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
    EXPECT_NEAR(res.value, lo + hi, 1e-10 * (lo + hi));
}

TEST(Quadrature, ErrorEstimateFlagsUnderResolvedIntegrand) {
    auto f = [](double e) { return 0.005 / PI / (e * e + 0.005 * 0.005); };
    const auto res = integrate_real_line<double>(f, 8.0, 1.0);
    EXPECT_GT(res.error, 1e-3);
}

TEST(Quadrature, EnergyQuadratureThrowsWhenCoarse) {
    ModelParams p = single_level_preset();
    QuadratureSpec q = default_quadrature(p);
    q.de = 4.0;
    auto f = [](double e) { return 0.05 / PI / (e * e + 0.0025); };
    EXPECT_THROW(energy_quadrature(f, p, q), QuadratureNotConverged);
    q.de = 0.001;
    EXPECT_NO_THROW(energy_quadrature(f, p, q));
}

TEST(Quadrature, WindowCoversDrivingSidebands) {
    const ModelParams p = junction_preset(2.0, 1.5, 3.0);
    const QuadratureSpec q = default_quadrature(p);
    EXPECT_DOUBLE_EQ(q.de, 0.05);
    EXPECT_GE(integration_half_width(p, q), q.e_max + 3.0 + (p.n_floquet + 1) * p.omega);
    QuadratureSpec bad = q;
    bad.de = 0.0;
    EXPECT_THROW(validate(bad), ConfigError);
}
