#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "kdpp/errors.hpp"
#include "kdpp/lattice.hpp"
#include "kdpp/rng.hpp"

using namespace kdpp;

TEST(Window, ParseAndFormat)
{
    Window const w = Window::parse("-4..4");
    EXPECT_EQ(w.size(), 9u);
    EXPECT_EQ(w.lo().index, -4);
    EXPECT_EQ(w.to_string(), "-4..4");
    EXPECT_DOUBLE_EQ(w.site(0).position(), -3.5);
    EXPECT_THROW((void)Window::parse("4..-4"), DomainError);
    EXPECT_THROW((void)Window::parse("1-3"), DomainError);
    EXPECT_THROW((void)w.offset(Site{5}), WindowMismatch);
}

TEST(Configuration, BitmaskAndStringAgree)
{
    Window const w = Window::from_indices(0, 4);
    auto const c = Configuration::from_string(w, "10110");
    EXPECT_EQ(c.bitmask(), 0b01101u);
    EXPECT_EQ(Configuration::from_bitmask(w, c.bitmask()), c);
    EXPECT_EQ(c.particle_count(), 3u);
    EXPECT_EQ(c.to_string(), "10110");
    EXPECT_THROW((void)Configuration::from_string(w, "101"), WindowMismatch);
    EXPECT_THROW((void)Configuration::from_string(w, "10120"), DomainError);
}

TEST(SwapPair, RejectsSamePoint) { EXPECT_THROW(SwapPair(Site{1}, Site{1}), SamePoint); }

TEST(Rng, DeterministicPerSeed)
{
    SeededRng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i)
    {
        auto const va = a();
        EXPECT_EQ(va, b());
        EXPECT_NE(va, c());
    }
}

TEST(Rng, SplitStreamsDiffer)
{
    SeededRng const root(7);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 64; ++s)
    {
        auto r = root.split(s);
        firsts.insert(r());
    }
    EXPECT_EQ(firsts.size(), 64u);
    // Splitting does not depend on how far the parent has advanced.
    SeededRng advanced(7);
    for (int i = 0; i < 10; ++i)
        (void)advanced();
    auto x = root.split(3);
    auto y = advanced.split(3);
    EXPECT_EQ(x(), y());
}

TEST(Rng, UniformMoments)
{
    SeededRng r(1);
    int const n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double const u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.005);
}

TEST(Rng, ExponentialMean)
{
    SeededRng r(2);
    int const n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += r.exponential(4.0);
    EXPECT_NEAR(sum / n, 0.25, 4.0 * 0.25 / std::sqrt(n));
}

TEST(Rng, BelowIsUniform)
{
    SeededRng r(3);
    std::vector<int> counts(7, 0);
    int const n = 70000;
    for (int i = 0; i < n; ++i)
        ++counts[r.below(7)];
    for (int c : counts)
        EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
}
