#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kdpp/errors.hpp"
#include "kdpp/dpp.hpp"
#include "kdpp/exact.hpp"

using namespace kdpp;

namespace
{

KernelMatrix kernel(std::int64_t lo, std::int64_t hi)
{
    return kernel_matrix(AdmissiblePair(1.5, 1.7), Window::from_indices(lo, hi));
}

std::vector<double> random_vector(std::size_t n, std::mt19937& gen)
{
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v)
        x = d(gen);
    return v;
}

}  // namespace

TEST(SectorStates, CountAndOrder)
{
    Window const w = Window::from_indices(0, 5);
    auto const states = sector_states(w, 3);
    EXPECT_EQ(states.size(), 20u);
    for (std::size_t i = 1; i < states.size(); ++i)
        EXPECT_LT(states[i - 1].bitmask(), states[i].bitmask());
    for (auto const& s : states)
        EXPECT_EQ(s.particle_count(), 3u);
}

TEST(Generator, StructuralIdentities)
{
    auto const k = kernel(-4, 3);
    RateModel const model{RateKind::SqrtRatio, ProximitySpec::exp_decay(1.0)};
    auto const g = build_generator(model, k, 4);
    EXPECT_EQ(g.size(), 70u);
    EXPECT_LT(conservativity_residual(g), 1e-12);
    EXPECT_LT(check_reversibility(g), 1e-10);
    EXPECT_LT(stationarity_residual(g), 1e-10);
    EXPECT_TRUE(is_connected(g));
    auto const dense = g.dense();
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
        {
            EXPECT_EQ(dense(i, j), g.entry(i, j));
            if (i != j)
                EXPECT_GE(dense(i, j), 0.0);
        }
}

TEST(Generator, DirichletFormIdentity)
{
    auto const k = kernel(-4, 3);
    auto const g = build_generator(RateModel{}, k, 3);
    std::mt19937 gen(17);
    for (int i = 0; i < 20; ++i)
    {
        auto const f = random_vector(g.size(), gen);
        auto const h = random_vector(g.size(), gen);
        EXPECT_NEAR(dirichlet_form(g, f, h), generator_form(g, f, h), 1e-10);
    }
    std::vector<double> const ones(g.size(), 1.0);
    EXPECT_LT(std::abs(dirichlet_form(g, ones, ones)), 1e-12);
}

TEST(Generator, FromDenseRoundTrip)
{
    auto const k = kernel(-2, 2);
    auto const g = build_generator(RateModel{}, k, 2);
    auto const d = GeneratorMatrix::from_dense(g.window(), g.states(), g.dense(), g.measure());
    EXPECT_LT(linalg::max_abs(linalg::add(d.dense(), g.dense(), -1.0)), 1e-14);
    std::mt19937 gen(3);
    auto const f = random_vector(g.size(), gen);
    EXPECT_NEAR(dirichlet_form(d, f, f), dirichlet_form(g, f, f), 1e-12);
}

TEST(Spectrum, ZeroTopAndGap)
{
    auto const k = kernel(-4, 3);
    auto const s = spectrum(build_generator(RateModel{}, k, 3));
    EXPECT_NEAR(s.eigenvalues.front(), 0.0, 1e-10);
    for (double e : s.eigenvalues)
        EXPECT_LE(e, 1e-10);
    EXPECT_GT(s.spectral_gap, 0.0);
}

TEST(Spectrum, RegressionBaseline)
{
    // Six sites, three particles, nearest-neighbour Metropolis.
    auto const k = kernel(-3, 2);
    auto const s = spectrum(build_generator(RateModel{}, k, 3));
    EXPECT_NEAR(s.spectral_gap, 1.076306551168408, 1e-10);
}

TEST(Spectrum, SingleStateSector)
{
    auto const k = kernel(-2, 2);
    auto const s = spectrum(build_generator(RateModel{}, k, 0));
    ASSERT_EQ(s.eigenvalues.size(), 1u);
    EXPECT_EQ(s.spectral_gap, 0.0);
}

TEST(Semigroup, StochasticAndConvergesToMu)
{
    auto const k = kernel(-3, 2);
    auto const g = build_generator(RateModel{}, k, 2);
    for (double t : {0.1, 1.0, 50.0})
    {
        auto const p = semigroup(g, t);
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            double sum = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j)
            {
                EXPECT_GE(p(i, j), -1e-9);
                sum += p(i, j);
            }
            EXPECT_NEAR(sum, 1.0, 1e-9);
        }
        if (t == 50.0)
            for (std::size_t j = 0; j < g.size(); ++j)
                EXPECT_NEAR(p(0, j), g.measure()[j], 1e-8);
    }
}

TEST(Semigroup, StiffChainKeepsMuInvariant)
{
    // Glauber-like rates with long-range proximity reach ~1e9 on this sector.
    auto const k = kernel(-4, 3);
    RateModel const model{RateKind::GlauberLike, ProximitySpec::exp_decay(0.5)};
    auto const g = build_generator(model, k, 5);
    auto const p = semigroup(g, 5.0);
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        double mass = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            EXPECT_GE(p(i, j), -1e-12);
            mass += g.measure()[i] * p(i, j);
        }
        EXPECT_NEAR(mass, g.measure()[j], 1e-12);
    }
}

TEST(Semigroup, MatchesPlainPadeWhenNotStiff)
{
    auto const k = kernel(-3, 2);
    auto const g = build_generator(RateModel{}, k, 3);
    linalg::Matrix q = g.dense();
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j)
            q(i, j) *= 2.0;
    EXPECT_LT(linalg::max_abs(linalg::add(semigroup(g, 2.0), linalg::expm(q), -1.0)), 1e-12);
}

TEST(RateMoments, MatchManualSum)
{
    auto const k = kernel(-2, 2);
    RateModel const model{RateKind::GlauberLike, ProximitySpec::finite_range(2)};
    auto const pmf = enumerate_distribution(k);
    // The sum runs over every y != x, including pairs with equal occupancy.
    Site const x{0};
    double l1 = 0.0, l2 = 0.0;
    for (std::uint64_t m = 0; m < pmf.probs().size(); ++m)
    {
        auto const g = Configuration::from_bitmask(k.window(), m);
        double s = 0.0;
        for (std::size_t j = 0; j < k.size(); ++j)
        {
            Site const y = k.window().site(j);
            if (y == x || pmf[m] <= 0.0)
                continue;
            s += rate(model, k, g, SwapPair(x, y));
        }
        l1 += pmf[m] * s;
        l2 += pmf[m] * s * s;
    }
    auto const rm = rate_moments(model, k, x);
    EXPECT_NEAR(rm.l1, l1, 1e-12);
    EXPECT_NEAR(rm.l2, l2, 1e-12);
}

TEST(Generator, SizeLimits)
{
    auto const k = kernel(-8, 7);
    EXPECT_THROW((void)build_generator(RateModel{}, k), SizeError);
}
