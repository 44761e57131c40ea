#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "kdpp/errors.hpp"
#include "kdpp/specfun.hpp"

using namespace kdpp::specfun;

// Reference values computed with mpmath at 40 digits.
TEST(LogGamma, ReferenceValues)
{
    auto const half = log_gamma_signed(0.5);
    EXPECT_NEAR(half.log_abs, 0.5723649429247000871, 1e-14);
    EXPECT_EQ(half.sign, 1);

    auto const mhalf = log_gamma_signed(-0.5);
    EXPECT_NEAR(mhalf.log_abs, 1.265512123484645396, 1e-14);
    EXPECT_EQ(mhalf.sign, -1);

    EXPECT_NEAR(log_gamma_signed(1.0).log_abs, 0.0, 1e-15);
    EXPECT_NEAR(log_gamma_signed(10.0).log_abs, std::log(362880.0), 1e-12);
}

TEST(LogGamma, Recurrence)
{
    for (double x = 0.13; x < 40.0; x += 0.37)
    {
        auto const a = log_gamma_signed(x + 1.0);
        auto const b = log_gamma_signed(x);
        EXPECT_NEAR(a.log_abs - b.log_abs, std::log(x), 1e-12 * std::max(1.0, std::abs(a.log_abs)))
            << "x=" << x;
    }
}

TEST(LogGamma, SignAlternatesOnNegativeAxis)
{
    for (int n = 1; n <= 20; ++n)
    {
        double const x = -n + 0.5;
        int const expected = (n % 2 == 1) ? -1 : 1;
        EXPECT_EQ(log_gamma_signed(x).sign, expected) << "x=" << x;
    }
}

TEST(LogGamma, PolesThrow)
{
    EXPECT_THROW((void)log_gamma_signed(0.0), kdpp::PoleError);
    EXPECT_THROW((void)log_gamma_signed(-3.0), kdpp::PoleError);
}

TEST(LogGamma, Complex)
{
    auto const a = log_gamma_complex({2.0, 3.0});
    EXPECT_NEAR(a.real(), -2.092851753092733350, 1e-13);
    EXPECT_NEAR(a.imag(), 2.302396543466867626, 1e-13);

    auto const b = log_gamma_complex({0.3, 0.4});
    EXPECT_NEAR(b.real(), 0.4966559033817257967, 1e-13);
    EXPECT_NEAR(b.imag(), -0.9827434476071466603, 1e-13);

    // Compare through exp: the branch of the imaginary part may differ by 2 pi k.
    std::complex<double> const ref{-1.494187308911357506, -8.646475682803377345};
    auto const c = log_gamma_complex({-2.5, 0.7});
    EXPECT_LT(std::abs(std::exp(c) - std::exp(ref)), 1e-13);
}

TEST(LogGamma, ComplexMatchesRealAxis)
{
    for (double x = 0.25; x < 30.0; x += 1.1)
        EXPECT_NEAR(log_gamma_complex({x, 0.0}).real(), log_gamma_signed(x).log_abs, 1e-12);
}

TEST(Digamma, ReferenceValues)
{
    EXPECT_NEAR(digamma(1.0), -0.5772156649015328606, 1e-14);
    EXPECT_NEAR(digamma(0.5), -1.963510026021423479, 1e-14);
    auto const w = digamma_complex({0.8, 0.4});
    EXPECT_NEAR(w.real(), -0.6745859178595777815, 1e-13);
    EXPECT_NEAR(w.imag(), 0.7873958602874657687, 1e-13);
}

TEST(Digamma, RecurrenceOnGrid)
{
    for (int i = 0; i < 1000; ++i)
    {
        double const x = -9.95 + 0.0301 * i;
        if (std::abs(x - std::round(x)) < 1e-3 || std::abs(x + 1.0 - std::round(x + 1.0)) < 1e-3)
            continue;
        double const lhs = digamma(x + 1.0) - digamma(x);
        EXPECT_NEAR(lhs, 1.0 / x, 1e-10 * std::max(1.0, std::abs(1.0 / x))) << "x=" << x;
    }
}

TEST(Digamma, ReflectionFormula)
{
    for (double x = 0.05; x < 1.0; x += 0.1)
    {
        double const lhs = digamma(1.0 - x) - digamma(x);
        EXPECT_NEAR(lhs, std::numbers::pi / std::tan(std::numbers::pi * x), 1e-11);
    }
}

TEST(Digamma, PoleThrows) { EXPECT_THROW((void)digamma(-2.0), kdpp::PoleError); }

TEST(SinPi, ExactAtIntegers)
{
    for (int n = -10; n <= 10; ++n)
        EXPECT_EQ(sin_pi(n), 0.0);
    EXPECT_NEAR(sin_pi(0.5), 1.0, 1e-16);
    EXPECT_NEAR(sin_pi(1e6 + 0.25), std::sqrt(0.5), 1e-12);
}
