#include <cmath>

#include <gtest/gtest.h>

#include "kdpp/dynamics.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/rn.hpp"

using namespace kdpp;

namespace
{

KernelMatrix kernel(std::int64_t lo, std::int64_t hi)
{
    return kernel_matrix(AdmissiblePair(1.5, 1.7), Window::from_indices(lo, hi));
}

constexpr RateKind kAllKinds[] = {RateKind::Metropolis, RateKind::SqrtRatio, RateKind::GlauberLike};

}  // namespace

TEST(Proximity, Kinds)
{
    EXPECT_EQ(proximity_u(ProximitySpec::nearest_neighbor(2.0), Site{0}, Site{1}), 2.0);
    EXPECT_EQ(proximity_u(ProximitySpec::nearest_neighbor(), Site{0}, Site{2}), 0.0);
    EXPECT_NEAR(proximity_u(ProximitySpec::exp_decay(0.5), Site{0}, Site{3}), std::exp(-1.5), 1e-15);
    EXPECT_EQ(proximity_u(ProximitySpec::finite_range(2), Site{0}, Site{2}), 1.0);
    EXPECT_EQ(proximity_u(ProximitySpec::finite_range(2), Site{0}, Site{3}), 0.0);
    EXPECT_THROW((void)proximity_u(ProximitySpec{}, Site{1}, Site{1}), SamePoint);
}

TEST(Proximity, ParseRoundTrip)
{
    for (auto const* text : {"nn", "exp:0.5", "range:3"})
        EXPECT_EQ(ProximitySpec::parse(text).to_string(), text);
    EXPECT_THROW((void)ProximitySpec::parse("bogus"), DomainError);
    EXPECT_THROW((void)ProximitySpec::parse("exp:-1"), DomainError);
}

TEST(RateKind, ParseRoundTrip)
{
    for (auto k : kAllKinds)
        EXPECT_EQ(parse_rate_kind(to_string(k)), k);
    EXPECT_THROW((void)parse_rate_kind("heat-bath"), DomainError);
}

TEST(RateFromPhi, Formulas)
{
    EXPECT_DOUBLE_EQ(rate_from_phi(RateKind::Metropolis, 2.0, 0.25), 0.5);
    EXPECT_DOUBLE_EQ(rate_from_phi(RateKind::Metropolis, 2.0, 4.0), 2.0);
    EXPECT_DOUBLE_EQ(rate_from_phi(RateKind::SqrtRatio, 2.0, 4.0), 4.0);
    EXPECT_DOUBLE_EQ(rate_from_phi(RateKind::GlauberLike, 2.0, 4.0), 10.0);
}

TEST(DetailedBalance, AllModelsAllConfigurations)
{
    auto const k = kernel(-4, 3);
    auto const pmf = enumerate_distribution(k);
    for (auto kind : kAllKinds)
    {
        RateModel const model{kind, ProximitySpec::exp_decay(0.7)};
        for (std::uint64_t m = 0; m < pmf.probs().size(); ++m)
        {
            if (pmf[m] <= 0.0)
                continue;
            auto const g = Configuration::from_bitmask(k.window(), m);
            for (std::size_t i = 0; i < k.size(); ++i)
                for (std::size_t j = i + 1; j < k.size(); ++j)
                {
                    SwapPair const s(k.window().site(i), k.window().site(j));
                    auto const sg = apply_transposition(g, s);
                    double const lhs = pmf[m] * rate(model, k, g, s);
                    double const rhs = pmf[sg.bitmask()] * rate(model, k, sg, s);
                    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(lhs, rhs) + 1e-300);
                    EXPECT_LT(symmetry_check(model, k, g, s), 1e-10);
                }
        }
    }
}

TEST(JumpRates, TotalMatchesPairs)
{
    auto const k = kernel(-3, 3);
    auto const g = Configuration::from_string(k.window(), "1010010");
    RateModel const model{RateKind::Metropolis, ProximitySpec::finite_range(2)};
    auto const jr = total_jump_rate(model, k, g);
    double sum = 0.0;
    for (auto const& pr : jr.per_pair)
    {
        EXPECT_NE(g.occupied(pr.pair.x()), g.occupied(pr.pair.y()));
        EXPECT_NEAR(pr.rate, 2.0 * rate(model, k, g, pr.pair), 1e-12);
        sum += pr.rate;
    }
    EXPECT_NEAR(jr.total, sum, 1e-12);
}

TEST(Simulate, ConservesParticlesAndIsReproducible)
{
    auto const k = kernel(-4, 3);
    auto const init = Configuration::from_string(k.window(), "11100000");
    RateModel const model{RateKind::Metropolis, ProximitySpec::nearest_neighbor()};
    auto const t1 = simulate(model, k, init, 20.0, SeededRng(4));
    auto const t2 = simulate(model, k, init, 20.0, SeededRng(4));
    EXPECT_EQ(trajectory_csv(t1), trajectory_csv(t2));
    EXPECT_FALSE(t1.events.empty());
    double prev = 0.0;
    for (auto const& e : t1.events)
    {
        EXPECT_GT(e.time, prev);
        EXPECT_LE(e.time, 20.0);
        prev = e.time;
    }
    EXPECT_EQ(final_configuration(t1).particle_count(), 3u);
    auto const dist = time_averaged_distribution(t1);
    double total = 0.0;
    for (double p : dist)
        total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Simulate, EmptyConfigurationIsAbsorbed)
{
    auto const k = kernel(0, 3);
    auto const t = simulate(RateModel{}, k, Configuration(k.window()), 5.0, SeededRng(1));
    EXPECT_TRUE(t.absorbed);
    EXPECT_TRUE(t.events.empty());
}

TEST(Simulate, EnvironmentKernel)
{
    AdmissiblePair const p(1.5, 1.7);
    auto const k = kernel_matrix(p, Window::from_indices(-2, 2));
    SimulationOptions opts;
    opts.phi_kernel = kernel_matrix(p, Window::from_indices(-6, 6));
    auto const init = Configuration::from_string(k.window(), "10100");
    auto const t = simulate(RateModel{}, k, init, 5.0, SeededRng(2), opts);
    EXPECT_EQ(final_configuration(t).particle_count(), 2u);
}
