#pragma once

#include <complex>

namespace kdpp::specfun
{

/// Gamma value in log-space: value = sign * exp(log_abs).
struct SignedLog
{
    double log_abs = 0.0;
    int sign = 1;

    [[nodiscard]] double value() const;
};

/// log|Gamma(x)| together with the sign of Gamma(x).
///
/// Lanczos approximation (g = 7, 9 terms) for x >= 0.5 and the reflection
/// formula below that. Relative accuracy of the reconstructed Gamma(x) is
/// better than 1e-12 for |x| <= 170; log_abs stays finite far beyond that.
/// Throws PoleError at 0, -1, -2, ...
[[nodiscard]] SignedLog log_gamma_signed(double x);

/// Principal-branch log Gamma(w) for complex w.
///
/// The imaginary part is continuous for Re(w) > 0. For Re(w) < 0.5 the
/// result comes from reflection and may differ from the continuous branch
/// by a multiple of 2*pi*i; exp(result) is still Gamma(w).
[[nodiscard]] std::complex<double> log_gamma_complex(std::complex<double> w);

/// psi(x) = Gamma'(x)/Gamma(x). Upward recurrence plus asymptotic series,
/// reflection for x < 0.5.
[[nodiscard]] double digamma(double x);

/// Complex digamma, same scheme as the real one. Needed for the diagonal
/// of the gamma kernel on the conjugate-pair branch.
[[nodiscard]] std::complex<double> digamma_complex(std::complex<double> w);

/// sin(pi * x) with exact argument reduction.
[[nodiscard]] double sin_pi(double x);

}  // namespace kdpp::specfun
