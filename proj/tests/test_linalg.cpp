#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kdpp/linalg.hpp"

using namespace kdpp::linalg;

namespace
{

Matrix random_symmetric(std::size_t n, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            a(i, j) = a(j, i) = u(gen);
    return a;
}

// Power iteration on a + shift I for the largest eigenvalue.
double power_iteration_max(Matrix const& a, double shift)
{
    std::size_t const n = a.rows();
    Matrix s = add(a, Matrix::identity(n), shift);
    std::vector<double> v(n, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it)
    {
        auto w = multiply(s, v);
        double norm = 0.0;
        for (double x : w)
            norm += x * x;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / norm;
        lambda = norm;
    }
    return lambda - shift;
}

}  // namespace

TEST(Lu, DeterminantOfKnownMatrix)
{
    Matrix a(3, 3);
    double const vals[] = {2, -1, 0, -1, 2, -1, 0, -1, 2};
    for (std::size_t i = 0; i < 9; ++i)
        a(i / 3, i % 3) = vals[i];
    EXPECT_NEAR(determinant(a), 4.0, 1e-14);
    EXPECT_DOUBLE_EQ(determinant(Matrix{}), 1.0);
}

TEST(Lu, InverseRoundTrip)
{
    Matrix a = add(random_symmetric(7, 3), Matrix::identity(7), 4.0);
    Matrix const prod = multiply(a, LuDecomposition(a).inverse());
    EXPECT_LT(max_abs(add(prod, Matrix::identity(7), -1.0)), 1e-13);
}

TEST(Lu, SingularDetected)
{
    Matrix a(2, 2, 1.0);
    LuDecomposition lu(a);
    EXPECT_TRUE(lu.singular());
    EXPECT_EQ(lu.determinant(), 0.0);
}

TEST(Jacobi, ReconstructsMatrix)
{
    Matrix const a = random_symmetric(12, 11);
    auto const e = jacobi_eigen(a);
    EXPECT_LT(eigen_residual(a, e), 1e-12);
    for (std::size_t i = 1; i < e.values.size(); ++i)
        EXPECT_LE(e.values[i - 1], e.values[i]);
}

TEST(Jacobi, LargestEigenvalueMatchesPowerIteration)
{
    Matrix const a = random_symmetric(9, 5);
    auto const e = jacobi_eigen(a);
    EXPECT_NEAR(e.values.back(), power_iteration_max(a, 10.0), 1e-9);
}

TEST(Expm, DiagonalAndNilpotent)
{
    Matrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    Matrix const e = expm(d);
    EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-13);
    EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-14);

    Matrix n(2, 2);
    n(0, 1) = 3.0;
    Matrix const en = expm(n);
    EXPECT_NEAR(en(0, 1), 3.0, 1e-14);
    EXPECT_NEAR(en(0, 0), 1.0, 1e-14);
}

TEST(Expm, TwoStateChain)
{
    // Rates a: 0 -> 1, b: 1 -> 0.
    double const a = 2.0, b = 0.5, t = 1.3;
    Matrix q(2, 2);
    q(0, 0) = -a;
    q(0, 1) = a;
    q(1, 0) = b;
    q(1, 1) = -b;
    Matrix qt = q;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            qt(i, j) *= t;
    Matrix const p = expm(qt);
    double const s = a + b;
    EXPECT_NEAR(p(0, 0), b / s + a / s * std::exp(-s * t), 1e-13);
    EXPECT_NEAR(p(1, 1), a / s + b / s * std::exp(-s * t), 1e-13);
}
