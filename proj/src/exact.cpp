#include "kdpp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "kdpp/dpp.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/rn.hpp"

namespace kdpp
{

GeneratorMatrix::GeneratorMatrix(Window w, std::optional<std::size_t> sector,
                                 std::vector<Configuration> states,
                                 std::vector<std::vector<Transition>> rows,
                                 std::vector<double> measure, RateFunction rates)
    : window_(w),
      sector_(sector),
      states_(std::move(states)),
      rows_(std::move(rows)),
      measure_(std::move(measure)),
      rates_(std::move(rates))
{
    if (rows_.size() != states_.size() || measure_.size() != states_.size())
        throw DimensionMismatch("generator: states, rows and measure differ in length");
    diagonal_.assign(states_.size(), 0.0);
    for (std::size_t i = 0; i < states_.size(); ++i)
    {
        require_same_window(w, states_[i].window(), "generator");
        index_.emplace(states_[i].bitmask(), i);
        double s = 0.0;
        for (auto const& t : rows_[i])
        {
            if (t.rate < 0.0)
                throw DomainError("generator: negative rate");
            s += t.rate;
        }
        diagonal_[i] = -s;
    }
}

GeneratorMatrix GeneratorMatrix::from_dense(Window w, std::vector<Configuration> states,
                                            linalg::Matrix const& q, std::vector<double> measure)
{
    std::size_t const n = states.size();
    if (q.rows() != n || q.cols() != n)
        throw DimensionMismatch("generator: Q shape differs from state count");
    std::vector<std::vector<Transition>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i == j || q(i, j) == 0.0)
                continue;
            // label the move by the first two sites where the states differ
            std::vector<std::size_t> diff;
            for (std::size_t s = 0; s < w.size() && diff.size() < 2; ++s)
                if (states[i].at(s) != states[j].at(s))
                    diff.push_back(s);
            if (diff.size() < 2)
                diff = {0, w.size() > 1 ? 1u : 0u};
            rows[i].push_back({j, SwapPair(w.site(diff[0]), w.site(diff[1])), q(i, j)});
        }
    }
    return {w, std::nullopt, std::move(states), std::move(rows), std::move(measure), nullptr};
}

double GeneratorMatrix::entry(std::size_t i, std::size_t j) const
{
    if (i == j)
        return diagonal_[i];
    double q = 0.0;
    for (auto const& t : rows_[i])
        if (t.to == j)
            q += t.rate;
    return q;
}

std::optional<std::size_t> GeneratorMatrix::index_of(Configuration const& c) const
{
    if (!(c.window() == window_))
        return std::nullopt;
    auto const it = index_.find(c.bitmask());
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<double> GeneratorMatrix::apply(std::span<double const> f) const
{
    if (f.size() != size())
        throw DimensionMismatch("generator apply: vector length differs");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i)
    {
        double s = diagonal_[i] * f[i];
        for (auto const& t : rows_[i])
            s += t.rate * f[t.to];
        out[i] = s;
    }
    return out;
}

std::vector<double> GeneratorMatrix::left_apply(std::span<double const> mu) const
{
    if (mu.size() != size())
        throw DimensionMismatch("generator left_apply: vector length differs");
    std::vector<double> out(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
    {
        out[i] += mu[i] * diagonal_[i];
        for (auto const& t : rows_[i])
            out[t.to] += mu[i] * t.rate;
    }
    return out;
}

linalg::Matrix GeneratorMatrix::dense() const
{
    if (size() > kMaxDenseStates)
    {
        throw SizeError("dense generator limited to " + std::to_string(kMaxDenseStates)
                        + " states, have " + std::to_string(size()));
    }
    linalg::Matrix q(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
    {
        q(i, i) = diagonal_[i];
        for (auto const& t : rows_[i])
            q(i, t.to) += t.rate;
    }
    return q;
}

//---------------------------------------------------------------------------//

std::vector<Configuration> sector_states(Window const& w, std::size_t count)
{
    std::size_t const n = w.size();
    if (count > n)
        throw DomainError("sector particle count exceeds window size");
    if (n > 63)
        throw SizeError("sector enumeration needs at most 63 sites");
    std::vector<Configuration> out;
    if (count == 0)
    {
        out.push_back(Configuration(w));
        return out;
    }
    // Gosper's hack: next larger integer with the same popcount
    std::uint64_t m = (std::uint64_t{1} << count) - 1;
    std::uint64_t const limit = std::uint64_t{1} << n;
    while (m < limit)
    {
        out.push_back(Configuration::from_bitmask(w, m));
        std::uint64_t const c = m & (~m + 1);
        std::uint64_t const r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    return out;
}

GeneratorMatrix build_generator(RateModel const& model, KernelMatrix const& k,
                                std::optional<std::size_t> sector)
{
    Window const& w = k.window();
    std::size_t const n = w.size();
    std::size_t const cap = sector ? kMaxSectorWindow : kMaxFullSpaceWindow;
    if (n > cap)
    {
        throw SizeError("generator window of " + std::to_string(n) + " sites exceeds the cap of "
                        + std::to_string(cap));
    }
    model.proximity.validate();

    std::vector<Configuration> states;
    if (sector)
    {
        states = sector_states(w, *sector);
    }
    else
    {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
            states.push_back(Configuration::from_bitmask(w, m));
    }

    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<double> prob(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        index.emplace(states[i].bitmask(), i);
        prob[i] = config_probability(k, states[i]);
    }

    std::vector<std::vector<Transition>> rows(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        if (!(prob[i] > 0.0))
            continue;  // unreachable under mu; leave the row empty
        std::uint64_t const mask = states[i].bitmask();
        for (std::size_t a = 0; a < n; ++a)
        {
            for (std::size_t b = a + 1; b < n; ++b)
            {
                if (states[i].at(a) == states[i].at(b))
                    continue;
                double const u = proximity_u(model.proximity, w.site(a), w.site(b));
                if (u <= 0.0)
                    continue;
                std::uint64_t const to = mask ^ (std::uint64_t{1} << a) ^ (std::uint64_t{1} << b);
                std::size_t const j = index.at(to);
                double const phi = prob[j] / prob[i];
                double const c = rate_from_phi(model.kind, u, phi);
                if (c > 0.0)
                    rows[i].push_back({j, SwapPair(w.site(a), w.site(b)), 2.0 * c});
            }
        }
    }

    double total = 0.0;
    for (double p : prob)
        total += std::max(p, 0.0);
    if (!(total > 0.0))
        throw ZeroProbability("build_generator: state list has zero probability");
    std::vector<double> mu(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        mu[i] = std::max(prob[i], 0.0) / total;

    RateFunction rates = [model, k](Configuration const& c, SwapPair const& s) {
        return rate(model, k, c, s);
    };
    return {w, sector, std::move(states), std::move(rows), std::move(mu), std::move(rates)};
}

double check_reversibility(GeneratorMatrix const& g)
{
    auto const& mu = g.measure();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        for (auto const& t : g.row(i))
        {
            double const fwd = mu[i] * t.rate;
            double const bwd = mu[t.to] * g.entry(t.to, i);
            double const scale = std::max({fwd, bwd, 1e-300});
            worst = std::max(worst, std::abs(fwd - bwd) / scale);
        }
    }
    return worst;
}

double dirichlet_form(GeneratorMatrix const& g, std::span<double const> f,
                      std::span<double const> h)
{
    if (f.size() != g.size() || h.size() != g.size())
        throw DimensionMismatch("dirichlet_form: vector length differs from state count");
    auto const& mu = g.measure();
    double total = 0.0;

    if (!g.rate_function())
    {
        // c = Q / 2 for each of the two orderings of a move
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            double s = 0.0;
            for (auto const& t : g.row(i))
                s += t.rate * (f[t.to] - f[i]) * (h[t.to] - h[i]);
            total += mu[i] * s;
        }
        return 0.5 * total;
    }

    Window const& w = g.window();
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        if (mu[i] == 0.0)
            continue;
        Configuration const& eta = g.states()[i];
        double s = 0.0;
        for (std::size_t a = 0; a < w.size(); ++a)
        {
            for (std::size_t b = 0; b < w.size(); ++b)
            {
                if (a == b || eta.at(a) == eta.at(b))
                    continue;
                SwapPair const pair(w.site(a), w.site(b));
                auto const j = g.index_of(apply_transposition(eta, pair));
                if (!j)
                    throw DomainError("dirichlet_form: swap leaves the state list");
                double const c = g.rate_function()(eta, pair);
                s += c * (f[*j] - f[i]) * (h[*j] - h[i]);
            }
        }
        total += mu[i] * s;
    }
    return 0.5 * total;
}

double generator_form(GeneratorMatrix const& g, std::span<double const> f,
                      std::span<double const> h)
{
    auto const qf = g.apply(f);
    if (h.size() != g.size())
        throw DimensionMismatch("generator_form: vector length differs from state count");
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s -= g.measure()[i] * qf[i] * h[i];
    return s;
}

double conservativity_residual(GeneratorMatrix const& g)
{
    std::vector<double> const ones(g.size(), 1.0);
    double worst = 0.0;
    for (double v : g.apply(ones))
        worst = std::max(worst, std::abs(v));
    return worst;
}

double stationarity_residual(GeneratorMatrix const& g)
{
    double worst = 0.0;
    for (double v : g.left_apply(g.measure()))
        worst = std::max(worst, std::abs(v));
    return worst;
}

namespace
{

// D^{1/2} Q D^{-1/2} for a reversible generator with D = diag(mu).
linalg::Matrix symmetrized(GeneratorMatrix const& g, char const* who)
{
    double const rev = check_reversibility(g);
    if (rev > 1e-8)
        throw NotReversible(std::string(who) + ": reversibility residual " + std::to_string(rev));
    auto const& mu = g.measure();
    for (double m : mu)
        if (!(m > 0.0))
            throw NumericalError(std::string(who) + ": measure must be strictly positive");

    linalg::Matrix const q = g.dense();
    std::size_t const n = g.size();
    linalg::Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) = std::sqrt(mu[i] / mu[j]) * q(i, j);
    // exact symmetrization of rounding noise
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
    return s;
}

}  // namespace

Spectrum spectrum(GeneratorMatrix const& g)
{
    auto const eig = linalg::jacobi_eigen(symmetrized(g, "spectrum"));
    Spectrum out;
    out.eigenvalues.assign(eig.values.rbegin(), eig.values.rend());
    out.spectral_gap = out.eigenvalues.size() > 1 ? -out.eigenvalues[1] : 0.0;
    return out;
}

linalg::Matrix semigroup(GeneratorMatrix const& g, double t)
{
    if (t < 0.0)
        throw DomainError("semigroup: t must be non-negative");
    linalg::Matrix q = g.dense();
    std::size_t const n = q.rows();

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        norm = std::max(norm, -2.0 * q(i, i) * t);
    int const squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    double const h = std::ldexp(t, -squarings);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            q(i, j) *= h;

    // Plain squaring doubles the row-sum error each step, which stiff chains (rates ~1e9)
    // cannot afford. Rows of exp(hQ) sum to one exactly, so the diagonal is rebuilt from the
    // off-diagonal mass after the Pade step and after every squaring.
    auto conserve = [n](linalg::Matrix& m) {
        for (std::size_t i = 0; i < n; ++i)
        {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    off += m(i, j);
            m(i, i) = 1.0 - off;
        }
    };
    linalg::Matrix p = linalg::expm(q);
    conserve(p);
    for (int k = 0; k < squarings; ++k)
    {
        p = linalg::multiply(p, p);
        conserve(p);
    }
    return p;
}

bool is_connected(GeneratorMatrix const& g)
{
    if (g.size() == 0)
        return true;
    // undirected reachability; transitions come in reversible pairs
    std::vector<std::vector<std::size_t>> adj(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        for (auto const& t : g.row(i))
        {
            adj[i].push_back(t.to);
            adj[t.to].push_back(i);
        }
    }
    std::vector<bool> seen(g.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty())
    {
        std::size_t const i = queue.front();
        queue.pop_front();
        for (std::size_t j : adj[i])
        {
            if (!seen[j])
            {
                seen[j] = true;
                ++reached;
                queue.push_back(j);
            }
        }
    }
    return reached == g.size();
}

RateMoments rate_moments(RateModel const& model, KernelMatrix const& k, Site x)
{
    Pmf const pmf = enumerate_distribution(k);
    Window const& w = k.window();
    std::size_t const ix = w.offset(x);
    RateMoments out;
    for (std::uint64_t m = 0; m < pmf.probs().size(); ++m)
    {
        double const p = pmf[m];
        if (!(p > 0.0))
            continue;
        Configuration const eta = Configuration::from_bitmask(w, m);
        SwapRatioEvaluator const phi(k, eta);
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j)
        {
            if (j == ix)
                continue;
            double const u = proximity_u(model.proximity, x, w.site(j));
            s += rate_from_phi(model.kind, u, phi(ix, j));
        }
        out.l1 += p * s;
        out.l2 += p * s * s;
    }
    return out;
}

}  // namespace kdpp
