#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdpp/kernel.hpp"
#include "kdpp/lattice.hpp"
#include "kdpp/rng.hpp"

namespace kdpp
{

/// Symmetric proximity weight u(x, y) >= 0 with finite row sums.
struct ProximitySpec
{
    enum class Kind
    {
        NearestNeighbor,
        ExpDecay,
        FiniteRange
    };

    Kind kind = Kind::NearestNeighbor;
    double weight = 1.0;
    double alpha = 1.0;      // ExpDecay only
    std::int64_t range = 1;  // FiniteRange only

    static ProximitySpec nearest_neighbor(double weight = 1.0);
    static ProximitySpec exp_decay(double alpha, double weight = 1.0);
    static ProximitySpec finite_range(std::int64_t r, double weight = 1.0);

    /// "nn", "exp:<alpha>" or "range:<r>"; weight is set separately.
    static ProximitySpec parse(std::string_view text, double weight = 1.0);
    [[nodiscard]] std::string to_string() const;

    /// Throws DomainError when weight <= 0, alpha <= 0 or range < 1.
    void validate() const;
};

[[nodiscard]] double proximity_u(ProximitySpec const& spec, Site x, Site y);

enum class RateKind
{
    Metropolis,   // u min(phi, 1)
    SqrtRatio,    // u phi^{1/2}
    GlauberLike,  // u (phi + 1)
};

[[nodiscard]] RateKind parse_rate_kind(std::string_view text);
[[nodiscard]] std::string to_string(RateKind kind);

struct RateModel
{
    RateKind kind = RateKind::Metropolis;
    ProximitySpec proximity;
};

/// c = u f(phi) for the given kind.
[[nodiscard]] double rate_from_phi(RateKind kind, double u, double phi);

/// c(gamma, x, y) with phi taken from the window DPP.
[[nodiscard]] double rate(RateModel const& model, KernelMatrix const& k,
                          Configuration const& gamma, SwapPair const& s);

/// a = c / phi^{1/2}; invariant under the swap for all built-in kinds.
[[nodiscard]] double swap_invariant_amplitude(RateModel const& model, KernelMatrix const& k,
                                              Configuration const& gamma, SwapPair const& s);

/// |P(gamma) c(gamma, s) - P(sigma gamma) c(sigma gamma, s)|.
[[nodiscard]] double symmetry_check(RateModel const& model, KernelMatrix const& k,
                                    Configuration const& gamma, SwapPair const& s);

struct PairRate
{
    SwapPair pair;
    double rate;  // 2 c(gamma, x, y): both orderings of the pair
};

struct JumpRates
{
    double total = 0.0;
    std::vector<PairRate> per_pair;
};

/// Unordered pairs with unequal occupancy and u > 0, ordered by (x, y).
[[nodiscard]] JumpRates total_jump_rate(RateModel const& model, KernelMatrix const& k,
                                        Configuration const& gamma);

struct SwapEvent
{
    double time;
    SwapPair pair;
};

struct Trajectory
{
    std::uint64_t seed = 0;
    Configuration initial;
    std::vector<SwapEvent> events;
    double t_max = 0.0;
    /// Set when the total rate vanished; the chain then idles until t_max.
    bool absorbed = false;
};

struct SimulationOptions
{
    /// Kernel on an enclosing window. When set, phi is evaluated there with
    /// the sites outside the simulation window frozen at one DPP draw; the
    /// dynamics is then only approximately reversible for the window DPP.
    std::optional<KernelMatrix> phi_kernel;
};

/// Gillespie simulation of the swap dynamics on a closed window.
[[nodiscard]] Trajectory simulate(RateModel const& model, KernelMatrix const& k,
                                  Configuration const& initial, double t_max, SeededRng rng,
                                  SimulationOptions const& opts = {});

/// Configuration after all events.
[[nodiscard]] Configuration final_configuration(Trajectory const& traj);

/// Fraction of [0, t_max] spent in each configuration, indexed by bitmask.
[[nodiscard]] std::vector<double> time_averaged_distribution(Trajectory const& traj);

/// `time,x,y` CSV, x and y as lattice positions.
[[nodiscard]] std::string trajectory_csv(Trajectory const& traj);

}  // namespace kdpp
