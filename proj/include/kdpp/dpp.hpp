#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kdpp/kernel.hpp"
#include "kdpp/lattice.hpp"
#include "kdpp/linalg.hpp"
#include "kdpp/rng.hpp"

namespace kdpp
{

/// Enumeration is limited to 2^20 configurations.
inline constexpr std::size_t kMaxEnumerationWindow = 20;

/// Probabilities in [-kClampTolerance, 0) are reported as 0.
inline constexpr double kClampTolerance = 1e-12;

/// P(gamma restricted to the window = eta) for the DPP with kernel K.
///
/// Determinant of the matrix whose column y is column y of K when eta(y) = 1
/// and column y of (I - K) otherwise. Tiny negative values from rounding are
/// clamped to zero.
[[nodiscard]] double config_probability(KernelMatrix const& k, Configuration const& eta);

/// Same as config_probability but returns the raw determinant (no clamp).
[[nodiscard]] double config_determinant(KernelMatrix const& k, Configuration const& eta);

/// n-point correlation det[K(x_i, x_j)]. The empty set gives 1.
[[nodiscard]] double correlation(KernelMatrix const& k, std::span<Site const> sites);

/// Exact law of the window configuration.
class Pmf
{
  public:
    Pmf(Window w, std::vector<double> probs, std::size_t clamped);

    [[nodiscard]] Window const& window() const { return window_; }
    /// Indexed by Configuration::bitmask().
    [[nodiscard]] std::vector<double> const& probs() const { return probs_; }
    [[nodiscard]] double operator[](std::uint64_t mask) const { return probs_[mask]; }
    [[nodiscard]] double total() const;
    /// Number of entries that were clamped from small negatives to 0.
    [[nodiscard]] std::size_t clamped() const { return clamped_; }

    /// P(all listed sites occupied).
    [[nodiscard]] double marginal(std::span<Site const> sites) const;
    /// Law conditioned on the particle count; entries outside the sector are 0.
    [[nodiscard]] Pmf conditioned_on_count(std::size_t count) const;

  private:
    Window window_;
    std::vector<double> probs_;
    std::size_t clamped_ = 0;
};

/// All 2^n configuration probabilities; SizeError above kMaxEnumerationWindow.
[[nodiscard]] Pmf enumerate_distribution(KernelMatrix const& k);

/// `bitmask,probability` CSV.
[[nodiscard]] std::string pmf_csv(Pmf const& pmf);

/// Exact sampler for the window DPP with a symmetric kernel.
///
/// Eigendecomposes K once; each draw keeps eigenvector k with probability
/// lambda_k and then places points one at a time, projecting the retained
/// span away from each chosen site.
class DppSampler
{
  public:
    /// Throws NumericalError if max |K V - V Lambda| > 1e-8.
    explicit DppSampler(KernelMatrix const& k);

    [[nodiscard]] Configuration operator()(SeededRng& rng) const;

    [[nodiscard]] std::vector<double> const& eigenvalues() const { return eig_.values; }
    [[nodiscard]] double residual() const { return residual_; }

  private:
    Window window_;
    linalg::SymmetricEigen eig_;
    double residual_ = 0.0;
};

[[nodiscard]] Configuration sample(KernelMatrix const& k, SeededRng& rng);

/// Fraction of samples having every listed site occupied.
[[nodiscard]] double empirical_correlation(std::span<Configuration const> samples,
                                           std::span<Site const> sites);

/// `sample_index,<x=pos>,...` CSV with 0/1 entries.
[[nodiscard]] std::string samples_csv(std::span<Configuration const> samples);

}  // namespace kdpp
