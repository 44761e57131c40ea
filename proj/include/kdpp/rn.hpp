#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kdpp/dpp.hpp"
#include "kdpp/kernel.hpp"
#include "kdpp/lattice.hpp"
#include "kdpp/linalg.hpp"
#include "kdpp/rng.hpp"

namespace kdpp
{

/// Exchange the occupancies of s.x() and s.y().
[[nodiscard]] Configuration apply_transposition(Configuration const& gamma, SwapPair const& s);

/// P(sigma_{x,y} gamma) / P(gamma) for the window DPP.
/// Throws ZeroProbability when P(gamma) < 1e-300.
[[nodiscard]] double rn_derivative(KernelMatrix const& k, Configuration const& gamma,
                                   SwapPair const& s);

/// Swap ratios for every pair at a fixed configuration.
///
/// With M the matrix whose determinant is P(gamma) and N = M^{-1}, swapping
/// x and y replaces two columns of M, so the ratio reduces to the 2x2
/// determinant (N_xx - 1)(N_yy - 1) - N_xy N_yx. One inversion serves all
/// pairs.
class SwapRatioEvaluator
{
  public:
    SwapRatioEvaluator(KernelMatrix const& k, Configuration const& gamma);

    [[nodiscard]] double operator()(std::size_t offset_x, std::size_t offset_y) const;
    [[nodiscard]] double operator()(SwapPair const& s) const;
    /// det M, i.e. the unclamped probability of gamma.
    [[nodiscard]] double probability() const { return probability_; }

  private:
    Window window_;
    std::vector<std::uint8_t> occ_;
    linalg::Matrix inverse_;
    double probability_ = 0.0;
};

struct RnMoments
{
    double first = 0.0;   // sum_eta P(eta) phi(eta, s); equals 1
    double second = 0.0;  // sum_eta P(eta) phi(eta, s)^2
};

/// Exact moments over all configurations with positive probability.
[[nodiscard]] RnMoments rn_moments(KernelMatrix const& k, SwapPair const& s);

/// Fixed occupancies on a few sites; the rest of the configuration is random.
using SitePattern = std::vector<std::pair<Site, bool>>;

struct StabilizationRow
{
    std::size_t window_size = 0;
    Window window = Window::from_indices(0, 0);
    double phi_mean = 0.0;
    double phi_std = 0.0;
    std::size_t n_samples = 0;
    /// |phi_mean(this) - phi_mean(previous row)|; 0 for the first row.
    double delta = 0.0;
    /// max over samples of |phi(gamma) phi(sigma gamma) - 1|.
    double max_inversion_residual = 0.0;
};

struct StabilizationOptions
{
    std::size_t samples_per_size = 100;
    std::size_t max_attempts = 1'000'000;
    unsigned threads = 1;
};

/// Window of `size` sites centred on the support of the pattern and swap.
[[nodiscard]] Window stabilization_window(SitePattern const& pattern, SwapPair const& s,
                                          std::size_t size);

/// Mean and spread of the window swap ratio as the window grows around a
/// fixed local pattern. Far occupancies are drawn from the window DPP
/// conditioned on the pattern, by rejection from the exact sampler. Size i
/// uses stream rng.split(i).
[[nodiscard]] std::vector<StabilizationRow>
rn_stabilization(AdmissiblePair const& p, SitePattern const& pattern, SwapPair const& s,
                 std::vector<std::size_t> const& window_sizes, SeededRng const& rng,
                 StabilizationOptions const& opts = {});

/// `window_size,phi_mean,phi_std,n_samples` CSV.
[[nodiscard]] std::string stabilization_csv(std::vector<StabilizationRow> const& rows);

}  // namespace kdpp
