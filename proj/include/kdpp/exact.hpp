#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "kdpp/dynamics.hpp"
#include "kdpp/kernel.hpp"
#include "kdpp/lattice.hpp"
#include "kdpp/linalg.hpp"

namespace kdpp
{

inline constexpr std::size_t kMaxFullSpaceWindow = 14;
inline constexpr std::size_t kMaxSectorWindow = 18;
/// Dense analysis (spectrum, matrix exponential) is limited to this many states.
inline constexpr std::size_t kMaxDenseStates = 1024;

/// Rate c(eta, x, y) for one ordering of a pair.
using RateFunction = std::function<double(Configuration const&, SwapPair const&)>;

struct Transition
{
    std::size_t to;
    SwapPair pair;
    double rate;  // Q(from, to) = 2 c(from, x, y)
};

/// Markov generator Q (= -A) of the swap dynamics on a finite state list.
///
/// Off-diagonal entries are stored sparsely per row; the diagonal is minus
/// the row sum. States are either all 2^n configurations (indexed by
/// bitmask) or one particle-number sector (indexed by combinadic rank).
class GeneratorMatrix
{
  public:
    GeneratorMatrix(Window w, std::optional<std::size_t> sector, std::vector<Configuration> states,
                    std::vector<std::vector<Transition>> rows, std::vector<double> measure,
                    RateFunction rates);

    /// Generator from a dense Q over configurations of a window (tests, toy
    /// chains). The Dirichlet form then falls back to c = Q / 2.
    static GeneratorMatrix from_dense(Window w, std::vector<Configuration> states,
                                      linalg::Matrix const& q, std::vector<double> measure);

    [[nodiscard]] Window const& window() const { return window_; }
    [[nodiscard]] std::optional<std::size_t> sector() const { return sector_; }
    [[nodiscard]] std::size_t size() const { return states_.size(); }
    [[nodiscard]] std::vector<Configuration> const& states() const { return states_; }
    [[nodiscard]] std::vector<double> const& measure() const { return measure_; }
    [[nodiscard]] std::vector<Transition> const& row(std::size_t i) const { return rows_[i]; }
    [[nodiscard]] double diagonal(std::size_t i) const { return diagonal_[i]; }
    [[nodiscard]] double entry(std::size_t i, std::size_t j) const;
    [[nodiscard]] std::optional<std::size_t> index_of(Configuration const& c) const;
    [[nodiscard]] RateFunction const& rate_function() const { return rates_; }

    /// (Q F)(i) = sum_j Q(i, j) F(j)
    [[nodiscard]] std::vector<double> apply(std::span<double const> f) const;
    /// (mu Q)(j) = sum_i mu(i) Q(i, j)
    [[nodiscard]] std::vector<double> left_apply(std::span<double const> mu) const;
    /// Dense copy; SizeError above kMaxDenseStates.
    [[nodiscard]] linalg::Matrix dense() const;

  private:
    Window window_;
    std::optional<std::size_t> sector_;
    std::vector<Configuration> states_;
    std::vector<std::vector<Transition>> rows_;
    std::vector<double> diagonal_;
    std::vector<double> measure_;
    RateFunction rates_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// All configurations of a window with `count` particles, in increasing
/// bitmask order (which is the combinadic order).
[[nodiscard]] std::vector<Configuration> sector_states(Window const& w, std::size_t count);

/// Q(eta, sigma eta) = 2 c(eta, x, y) for unordered pairs with unequal
/// occupancy; mu is the window DPP law normalized over the state list.
[[nodiscard]] GeneratorMatrix build_generator(RateModel const& model, KernelMatrix const& k,
                                              std::optional<std::size_t> sector = std::nullopt);

/// max over transitions of |mu(i) Q(i,j) - mu(j) Q(j,i)| / max(flux, 1e-300).
[[nodiscard]] double check_reversibility(GeneratorMatrix const& g);

/// 1/2 sum_eta mu(eta) sum_{x != y} c(eta, x, y) (grad F)(grad H), from rates.
[[nodiscard]] double dirichlet_form(GeneratorMatrix const& g, std::span<double const> f,
                                    std::span<double const> h);

/// <-Q F, H>_mu
[[nodiscard]] double generator_form(GeneratorMatrix const& g, std::span<double const> f,
                                    std::span<double const> h);

/// max_i |sum_j Q(i, j)|
[[nodiscard]] double conservativity_residual(GeneratorMatrix const& g);
/// max_j |(mu Q)(j)|
[[nodiscard]] double stationarity_residual(GeneratorMatrix const& g);

struct Spectrum
{
    std::vector<double> eigenvalues;  // descending
    double spectral_gap = 0.0;
};

/// Eigenvalues of D^{1/2} Q D^{-1/2}, D = diag(mu). Throws NotReversible when
/// the reversibility residual exceeds 1e-8.
[[nodiscard]] Spectrum spectrum(GeneratorMatrix const& g);

/// exp(t Q), dense.
[[nodiscard]] linalg::Matrix semigroup(GeneratorMatrix const& g, double t);

/// True iff every state reaches every other through positive-rate moves.
[[nodiscard]] bool is_connected(GeneratorMatrix const& g);

struct RateMoments
{
    double l1 = 0.0;  // E sum_{y != x} c(., x, y)
    double l2 = 0.0;  // E (sum_{y != x} c(., x, y))^2
};

/// Window-scale values of the integrability conditions on the total rate
/// out of site x.
[[nodiscard]] RateMoments rate_moments(RateModel const& model, KernelMatrix const& k, Site x);

}  // namespace kdpp
