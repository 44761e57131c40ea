#include "kdpp/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "kdpp/csv.hpp"
#include "kdpp/dpp.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/rn.hpp"

namespace kdpp
{

ProximitySpec ProximitySpec::nearest_neighbor(double weight)
{
    ProximitySpec s;
    s.kind = Kind::NearestNeighbor;
    s.weight = weight;
    s.validate();
    return s;
}

ProximitySpec ProximitySpec::exp_decay(double alpha, double weight)
{
    ProximitySpec s;
    s.kind = Kind::ExpDecay;
    s.alpha = alpha;
    s.weight = weight;
    s.validate();
    return s;
}

ProximitySpec ProximitySpec::finite_range(std::int64_t r, double weight)
{
    ProximitySpec s;
    s.kind = Kind::FiniteRange;
    s.range = r;
    s.weight = weight;
    s.validate();
    return s;
}

void ProximitySpec::validate() const
{
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw DomainError("proximity weight must be positive");
    if (kind == Kind::ExpDecay && (!(alpha > 0.0) || !std::isfinite(alpha)))
        throw DomainError("exp proximity needs alpha > 0");
    if (kind == Kind::FiniteRange && range < 1)
        throw DomainError("range proximity needs r >= 1");
}

ProximitySpec ProximitySpec::parse(std::string_view text, double weight)
{
    if (text == "nn")
        return nearest_neighbor(weight);
    auto const colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("proximity must be nn, exp:<alpha> or range:<r>");
    std::string_view const head = text.substr(0, colon);
    std::string const tail(text.substr(colon + 1));
    try
    {
        std::size_t used = 0;
        if (head == "exp")
        {
            double const a = std::stod(tail, &used);
            if (used == tail.size())
                return exp_decay(a, weight);
        }
        else if (head == "range")
        {
            long long const r = std::stoll(tail, &used);
            if (used == tail.size())
                return finite_range(r, weight);
        }
    }
    catch (std::logic_error const&)
    {
    }
    throw DomainError("proximity must be nn, exp:<alpha> or range:<r>, got '" + std::string(text)
                      + "'");
}

std::string ProximitySpec::to_string() const
{
    switch (kind)
    {
        case Kind::NearestNeighbor:
            return "nn";
        case Kind::ExpDecay:
            return "exp:" + format_g17(alpha);
        case Kind::FiniteRange:
            return "range:" + std::to_string(range);
    }
    return "nn";
}

double proximity_u(ProximitySpec const& spec, Site x, Site y)
{
    if (x == y)
        throw SamePoint("proximity_u: x == y");
    std::int64_t const d = x.index > y.index ? x.index - y.index : y.index - x.index;
    switch (spec.kind)
    {
        case ProximitySpec::Kind::NearestNeighbor:
            return d == 1 ? spec.weight : 0.0;
        case ProximitySpec::Kind::ExpDecay:
            return spec.weight * std::exp(-spec.alpha * static_cast<double>(d));
        case ProximitySpec::Kind::FiniteRange:
            return d <= spec.range ? spec.weight : 0.0;
    }
    return 0.0;
}

RateKind parse_rate_kind(std::string_view text)
{
    if (text == "metropolis")
        return RateKind::Metropolis;
    if (text == "sqrt-ratio")
        return RateKind::SqrtRatio;
    if (text == "glauber-like")
        return RateKind::GlauberLike;
    throw DomainError("rate model must be metropolis, sqrt-ratio or glauber-like, got '"
                      + std::string(text) + "'");
}

std::string to_string(RateKind kind)
{
    switch (kind)
    {
        case RateKind::Metropolis:
            return "metropolis";
        case RateKind::SqrtRatio:
            return "sqrt-ratio";
        case RateKind::GlauberLike:
            return "glauber-like";
    }
    return "metropolis";
}

double rate_from_phi(RateKind kind, double u, double phi)
{
    switch (kind)
    {
        case RateKind::Metropolis:
            return u * std::min(phi, 1.0);
        case RateKind::SqrtRatio:
            return u * std::sqrt(phi);
        case RateKind::GlauberLike:
            return u * (phi + 1.0);
    }
    return 0.0;
}

double rate(RateModel const& model, KernelMatrix const& k, Configuration const& gamma,
            SwapPair const& s)
{
    double const u = proximity_u(model.proximity, s.x(), s.y());
    return rate_from_phi(model.kind, u, rn_derivative(k, gamma, s));
}

double swap_invariant_amplitude(RateModel const& model, KernelMatrix const& k,
                                Configuration const& gamma, SwapPair const& s)
{
    double const phi = rn_derivative(k, gamma, s);
    double const u = proximity_u(model.proximity, s.x(), s.y());
    return rate_from_phi(model.kind, u, phi) / std::sqrt(phi);
}

double symmetry_check(RateModel const& model, KernelMatrix const& k, Configuration const& gamma,
                      SwapPair const& s)
{
    Configuration const swapped = apply_transposition(gamma, s);
    if (swapped == gamma)
        return 0.0;
    double const fwd = config_probability(k, gamma) * rate(model, k, gamma, s);
    double const bwd = config_probability(k, swapped) * rate(model, k, swapped, s);
    return std::abs(fwd - bwd);
}

JumpRates total_jump_rate(RateModel const& model, KernelMatrix const& k,
                          Configuration const& gamma)
{
    require_same_window(k.window(), gamma.window(), "total_jump_rate");
    Window const& w = k.window();
    JumpRates out;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        for (std::size_t j = i + 1; j < w.size(); ++j)
        {
            if (gamma.at(i) == gamma.at(j))
                continue;
            double const u = proximity_u(model.proximity, w.site(i), w.site(j));
            if (u <= 0.0)
                continue;
            SwapPair const s(w.site(i), w.site(j));
            double const r = 2.0 * rate(model, k, gamma, s);
            out.per_pair.push_back({s, r});
            out.total += r;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//

namespace
{

struct Candidate
{
    std::size_t i;
    std::size_t j;
    double u;
};

}  // namespace

Trajectory simulate(RateModel const& model, KernelMatrix const& k, Configuration const& initial,
                    double t_max, SeededRng rng, SimulationOptions const& opts)
{
    require_same_window(k.window(), initial.window(), "simulate");
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw DomainError("simulate: t_max must be finite and non-negative");
    model.proximity.validate();

    Window const& w = k.window();
    Trajectory traj{rng.seed(), initial, {}, t_max, false};

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        for (std::size_t j = i + 1; j < w.size(); ++j)
        {
            double const u = proximity_u(model.proximity, w.site(i), w.site(j));
            if (u > 0.0)
                candidates.push_back({i, j, u});
        }
    }

    // phi is evaluated on `phi_kernel` (default: the simulation kernel itself)
    KernelMatrix const& phi_k = opts.phi_kernel ? *opts.phi_kernel : k;
    if (!phi_k.window().contains(w))
        throw WindowMismatch("simulate: phi window must enclose the simulation window");
    std::size_t const shift = phi_k.window().offset(w.lo());
    Configuration embedded(phi_k.window());
    if (opts.phi_kernel)
    {
        SeededRng env_rng = rng.split(0);
        embedded = sample(phi_k, env_rng);
    }
    for (std::size_t i = 0; i < w.size(); ++i)
        embedded.set_at(shift + i, initial.at(i));

    Configuration current = initial;
    std::vector<double> rates;
    double t = 0.0;
    while (true)
    {
        SwapRatioEvaluator const phi(phi_k, embedded);
        rates.assign(candidates.size(), 0.0);
        double total = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c)
        {
            auto const& cand = candidates[c];
            if (current.at(cand.i) == current.at(cand.j))
                continue;
            double const ratio = phi(shift + cand.i, shift + cand.j);
            rates[c] = 2.0 * rate_from_phi(model.kind, cand.u, ratio);
            total += rates[c];
        }
        if (!(total > 0.0))
        {
            traj.absorbed = true;
            break;
        }
        double const dt = rng.exponential(total);
        if (t + dt > t_max)
            break;
        t += dt;

        double pick = rng.uniform() * total;
        std::size_t chosen = candidates.size();
        for (std::size_t c = 0; c < candidates.size(); ++c)
        {
            if (rates[c] <= 0.0)
                continue;
            chosen = c;
            if (pick < rates[c])
                break;
            pick -= rates[c];
        }
        auto const& cand = candidates[chosen];
        bool const oi = current.at(cand.i);
        current.set_at(cand.i, current.at(cand.j));
        current.set_at(cand.j, oi);
        embedded.set_at(shift + cand.i, current.at(cand.i));
        embedded.set_at(shift + cand.j, current.at(cand.j));
        traj.events.push_back({t, SwapPair(w.site(cand.i), w.site(cand.j))});
    }
    return traj;
}

Configuration final_configuration(Trajectory const& traj)
{
    Configuration c = traj.initial;
    for (auto const& e : traj.events)
        c = apply_transposition(c, e.pair);
    return c;
}

std::vector<double> time_averaged_distribution(Trajectory const& traj)
{
    Window const& w = traj.initial.window();
    if (w.size() > kMaxEnumerationWindow)
        throw SizeError("time_averaged_distribution: window too large");
    std::vector<double> dist(std::size_t{1} << w.size(), 0.0);
    if (!(traj.t_max > 0.0))
        return dist;
    Configuration c = traj.initial;
    double last = 0.0;
    for (auto const& e : traj.events)
    {
        dist[c.bitmask()] += e.time - last;
        last = e.time;
        c = apply_transposition(c, e.pair);
    }
    dist[c.bitmask()] += traj.t_max - last;
    for (double& d : dist)
        d /= traj.t_max;
    return dist;
}

std::string trajectory_csv(Trajectory const& traj)
{
    std::string out = "time,x,y\n";
    for (auto const& e : traj.events)
    {
        out += format_g17(e.time) + "," + format_g17(e.pair.x().position()) + ","
               + format_g17(e.pair.y().position()) + "\n";
    }
    return out;
}

}  // namespace kdpp
