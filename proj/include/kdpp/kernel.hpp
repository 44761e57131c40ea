#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include "kdpp/lattice.hpp"
#include "kdpp/linalg.hpp"

namespace kdpp
{

/// Largest window for which dense kernel matrices are built.
inline constexpr std::size_t kMaxKernelWindow = 4096;

/// True iff (z, z') lies in one of the two supported admissible branches:
/// a conjugate pair z' = conj(z) with Im z != 0, or two distinct reals in a
/// common open interval (m, m+1). z == z' is rejected.
[[nodiscard]] bool is_admissible(std::complex<double> z, std::complex<double> z_prime);

/// Validated gamma-kernel parameters.
class AdmissiblePair
{
  public:
    enum class Branch
    {
        RealInterval,
        ConjugatePair
    };

    /// Throws DomainError if the pair is not admissible.
    AdmissiblePair(std::complex<double> z, std::complex<double> z_prime);

    [[nodiscard]] Branch branch() const { return branch_; }
    [[nodiscard]] std::complex<double> z() const { return z_; }
    [[nodiscard]] std::complex<double> z_prime() const { return z_prime_; }
    /// sin(pi z) sin(pi z') / (pi sin(pi (z - z'))); purely imaginary on the
    /// conjugate branch.
    [[nodiscard]] std::complex<double> prefactor() const { return prefactor_; }

  private:
    Branch branch_;
    std::complex<double> z_;
    std::complex<double> z_prime_;
    std::complex<double> prefactor_;
};

/// A(x), B(x). Real on the RealInterval branch (imaginary parts zero);
/// unit-modulus with b = conj(a) on the ConjugatePair branch.
struct AbValues
{
    std::complex<double> a;
    std::complex<double> b;
};

[[nodiscard]] AbValues ab_values(AdmissiblePair const& p, Site x);

/// K_{z,z'}(x, y). The diagonal uses the digamma limit.
[[nodiscard]] double kernel_entry(AdmissiblePair const& p, Site x, Site y);

/// Symmetric correlation kernel restricted to a window.
class KernelMatrix
{
  public:
    /// Wraps an arbitrary symmetric matrix (tests, toy kernels).
    /// Throws DimensionMismatch if shapes disagree and NumericalError if the
    /// matrix is not symmetric to 1e-12.
    KernelMatrix(Window w, linalg::Matrix entries);

    [[nodiscard]] Window const& window() const { return window_; }
    [[nodiscard]] std::size_t size() const { return window_.size(); }
    [[nodiscard]] linalg::Matrix const& entries() const { return entries_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
    [[nodiscard]] double at(Site x, Site y) const;
    [[nodiscard]] double trace() const;

  private:
    Window window_;
    linalg::Matrix entries_;
};

/// Gamma kernel on a window. Throws SizeError above kMaxKernelWindow sites.
[[nodiscard]] KernelMatrix kernel_matrix(AdmissiblePair const& p, Window const& w);

/// Tridiagonal truncation of the second-order difference operator whose
/// positive spectral projection is the gamma kernel; zero boundary values
/// outside the window.
[[nodiscard]] linalg::Matrix difference_operator_matrix(AdmissiblePair const& p, Window const& w);

struct SpectralProjectionReport
{
    double max_abs_deviation = 0.0;  // max |P - K| on the central sub-window
    double commutator_norm = 0.0;    // max |K D - D K| on the central sub-window
    std::size_t central_size = 0;
};

/// Compares K with the projection onto positive eigenvectors of the
/// truncated difference operator, on the window shrunk by `margin` sites at
/// each end. Requires w.size() > 2 * margin.
[[nodiscard]] SpectralProjectionReport
spectral_projection_check(AdmissiblePair const& p, Window const& w, std::size_t margin);

/// CSV with header `x\y,<positions>` and one row per site, `%.17g` entries.
[[nodiscard]] std::string kernel_csv(KernelMatrix const& k);

}  // namespace kdpp
