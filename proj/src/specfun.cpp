#include "kdpp/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kdpp/errors.hpp"

namespace kdpp::specfun
{
namespace
{

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kLogPi = 1.14472988584940017414342735135305;

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

[[noreturn]] void throw_pole(char const* fn, double x)
{
    std::ostringstream os;
    os << fn << ": pole at " << x;
    throw PoleError(os.str());
}

// log Gamma(x) for x >= 0.5.
double lanczos_log_gamma(double x)
{
    double const xm1 = x - 1.0;
    double series = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i)
    {
        series += kLanczosCoef[i] / (xm1 + static_cast<double>(i));
    }
    double const t = xm1 + kLanczosG + 0.5;
    return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(series);
}

std::complex<double> lanczos_log_gamma(std::complex<double> w)
{
    std::complex<double> const wm1 = w - 1.0;
    std::complex<double> series = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i)
    {
        series += kLanczosCoef[i] / (wm1 + static_cast<double>(i));
    }
    std::complex<double> const t = wm1 + kLanczosG + 0.5;
    return kHalfLog2Pi + (wm1 + 0.5) * std::log(t) - t + std::log(series);
}

// Tail of psi(w) - log(w) for |w| >= 10: -1/(2w) - sum B_2k / (2k w^2k).
template<class T>
T digamma_asymptotic(T w)
{
    T const inv = T(1.0) / w;
    T const inv2 = inv * inv;
    // B_2k / 2k for k = 1..7
    T tail = inv2
             * (T(1.0 / 12)
                - inv2
                      * (T(1.0 / 120)
                         - inv2
                               * (T(1.0 / 252)
                                  - inv2
                                        * (T(1.0 / 240)
                                           - inv2
                                                 * (T(1.0 / 132)
                                                    - inv2
                                                          * (T(691.0 / 32760)
                                                             - inv2 * T(1.0 / 12)))))));
    return std::log(w) - T(0.5) * inv - tail;
}

}  // namespace

double SignedLog::value() const
{
    return sign * std::exp(log_abs);
}

double sin_pi(double x)
{
    // reduce to r in [-1, 1) with sin(pi x) = sin(pi r); fmod is exact
    double r = std::fmod(x, 2.0);
    if (r >= 1.0)
        r -= 2.0;
    else if (r < -1.0)
        r += 2.0;
    if (r == 0.0 || r == -1.0)
        return 0.0;
    if (r == 0.5)
        return 1.0;
    if (r == -0.5)
        return -1.0;
    return std::sin(std::numbers::pi * r);
}

SignedLog log_gamma_signed(double x)
{
    if (std::isnan(x) || is_nonpositive_integer(x))
        throw_pole("log_gamma_signed", x);
    if (x >= 0.5)
        return {lanczos_log_gamma(x), 1};

    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    double const s = sin_pi(x);
    SignedLog out;
    out.log_abs = kLogPi - std::log(std::abs(s)) - lanczos_log_gamma(1.0 - x);
    out.sign = s > 0 ? 1 : -1;
    return out;
}

std::complex<double> log_gamma_complex(std::complex<double> w)
{
    if (w.imag() == 0.0 && is_nonpositive_integer(w.real()))
        throw_pole("log_gamma_complex", w.real());
    if (w.real() >= 0.5)
        return lanczos_log_gamma(w);

    // shift the real part by an even integer so sin(pi w) keeps precision
    double const shift = 2.0 * std::floor(w.real() / 2.0);
    std::complex<double> const reduced(w.real() - shift, w.imag());
    std::complex<double> const s = std::sin(std::numbers::pi * reduced);
    return kLogPi - std::log(s) - lanczos_log_gamma(1.0 - w);
}

double digamma(double x)
{
    if (std::isnan(x) || is_nonpositive_integer(x))
        throw_pole("digamma", x);

    double acc = 0.0;
    if (x < 0.5)
    {
        // psi(x) = psi(1 - x) - pi cot(pi x); cot reduced modulo 1
        double const frac = x - std::floor(x);
        acc = -std::numbers::pi / std::tan(std::numbers::pi * frac);
        x = 1.0 - x;
    }
    while (x < 10.0)
    {
        acc -= 1.0 / x;
        x += 1.0;
    }
    return acc + digamma_asymptotic(x);
}

std::complex<double> digamma_complex(std::complex<double> w)
{
    if (w.imag() == 0.0 && is_nonpositive_integer(w.real()))
        throw_pole("digamma_complex", w.real());

    std::complex<double> acc = 0.0;
    if (w.real() < 0.5)
    {
        double const shift = std::floor(w.real());
        std::complex<double> const reduced(w.real() - shift, w.imag());
        std::complex<double> const arg = std::numbers::pi * reduced;
        acc = -std::numbers::pi * std::cos(arg) / std::sin(arg);
        w = 1.0 - w;
    }
    while (std::abs(w) < 10.0)
    {
        acc -= 1.0 / w;
        w += 1.0;
    }
    return acc + digamma_asymptotic(w);
}

}  // namespace kdpp::specfun
