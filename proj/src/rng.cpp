#include "kdpp/rng.hpp"

#include <cmath>

namespace kdpp
{

namespace
{
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ull;
}  // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ kStreamSalt)) {}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

SeededRng::result_type SeededRng::operator()()
{
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double SeededRng::uniform()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_open0()
{
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
}

double SeededRng::exponential(double rate)
{
    return -std::log(uniform_open0()) / rate;
}

std::uint64_t SeededRng::below(std::uint64_t n)
{
    // Lemire's multiply-shift with rejection
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n)
    {
        std::uint64_t const threshold = -n % n;
        while (low < threshold)
        {
            x = (*this)();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

SeededRng SeededRng::split(std::uint64_t stream) const
{
    std::uint64_t const k = mix64(key_ ^ mix64((stream + 1) * kStreamSalt));
    return SeededRng(seed_, k);
}

}  // namespace kdpp
