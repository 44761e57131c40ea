#pragma once

#include <cstdint>
#include <limits>

namespace kdpp
{

/// Counter-based splittable 64-bit generator.
///
/// Output i of a stream is a SplitMix64-style finalizer applied to
/// (key + i * golden gamma), so a stream is fully described by its key and
/// position. `split(k)` derives an independent stream key from the current
/// key and the stream index k; parents are unaffected by splitting.
class SeededRng
{
  public:
    using result_type = std::uint64_t;

    explicit SeededRng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1].
    double uniform_open0();
    /// Exponential variate with the given rate (> 0).
    double exponential(double rate);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    [[nodiscard]] SeededRng split(std::uint64_t stream) const;

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t counter() const { return counter_; }

  private:
    SeededRng(std::uint64_t seed, std::uint64_t key);

    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t z);

}  // namespace kdpp
