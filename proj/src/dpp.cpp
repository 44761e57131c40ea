#include "kdpp/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kdpp/csv.hpp"
#include "kdpp/errors.hpp"

namespace kdpp
{

double config_determinant(KernelMatrix const& k, Configuration const& eta)
{
    require_same_window(k.window(), eta.window(), "config_probability");
    std::size_t const n = k.size();
    linalg::Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        bool const occ = eta.at(j);
        for (std::size_t i = 0; i < n; ++i)
        {
            double const kij = k(i, j);
            m(i, j) = occ ? kij : (i == j ? 1.0 : 0.0) - kij;
        }
    }
    return linalg::determinant(std::move(m));
}

double config_probability(KernelMatrix const& k, Configuration const& eta)
{
    double const p = config_determinant(k, eta);
    if (p < 0.0 && p >= -kClampTolerance)
        return 0.0;
    return p;
}

double correlation(KernelMatrix const& k, std::span<Site const> sites)
{
    std::vector<std::size_t> idx;
    idx.reserve(sites.size());
    std::set<std::int64_t> seen;
    for (Site const& s : sites)
    {
        if (!seen.insert(s.index).second)
            throw DuplicateSite("correlation: site " + std::to_string(s.index) + " listed twice");
        idx.push_back(k.window().offset(s));
    }
    return linalg::determinant(linalg::principal_submatrix(k.entries(), idx));
}

//---------------------------------------------------------------------------//

Pmf::Pmf(Window w, std::vector<double> probs, std::size_t clamped)
    : window_(w), probs_(std::move(probs)), clamped_(clamped)
{
    if (w.size() > kMaxEnumerationWindow || probs_.size() != (std::size_t{1} << w.size()))
        throw DimensionMismatch("pmf needs exactly 2^n entries");
}

double Pmf::total() const
{
    double s = 0.0;
    for (double p : probs_)
        s += p;
    return s;
}

double Pmf::marginal(std::span<Site const> sites) const
{
    std::uint64_t need = 0;
    for (Site const& s : sites)
        need |= std::uint64_t{1} << window_.offset(s);
    double s = 0.0;
    for (std::uint64_t m = 0; m < probs_.size(); ++m)
        if ((m & need) == need)
            s += probs_[m];
    return s;
}

Pmf Pmf::conditioned_on_count(std::size_t count) const
{
    std::vector<double> out(probs_.size(), 0.0);
    double z = 0.0;
    for (std::uint64_t m = 0; m < probs_.size(); ++m)
    {
        if (static_cast<std::size_t>(__builtin_popcountll(m)) == count)
        {
            out[m] = probs_[m];
            z += probs_[m];
        }
    }
    if (!(z > 0.0))
        throw ZeroProbability("conditioned_on_count: sector has zero probability");
    for (double& p : out)
        p /= z;
    return {window_, std::move(out), clamped_};
}

Pmf enumerate_distribution(KernelMatrix const& k)
{
    std::size_t const n = k.size();
    if (n > kMaxEnumerationWindow)
    {
        throw SizeError("enumeration limited to " + std::to_string(kMaxEnumerationWindow)
                        + " sites, window has " + std::to_string(n));
    }
    std::vector<double> probs(std::size_t{1} << n);
    std::size_t clamped = 0;
    for (std::uint64_t m = 0; m < probs.size(); ++m)
    {
        double const p = config_determinant(k, Configuration::from_bitmask(k.window(), m));
        if (p < 0.0 && p >= -kClampTolerance)
        {
            probs[m] = 0.0;
            ++clamped;
        }
        else
        {
            probs[m] = p;
        }
    }
    return {k.window(), std::move(probs), clamped};
}

std::string pmf_csv(Pmf const& pmf)
{
    std::string out = "bitmask,probability\n";
    for (std::uint64_t m = 0; m < pmf.probs().size(); ++m)
        out += std::to_string(m) + "," + format_g17(pmf[m]) + "\n";
    return out;
}

//---------------------------------------------------------------------------//

DppSampler::DppSampler(KernelMatrix const& k) : window_(k.window())
{
    eig_ = linalg::jacobi_eigen(k.entries());
    residual_ = linalg::eigen_residual(k.entries(), eig_);
    if (residual_ > 1e-8)
    {
        throw NumericalError("sampler: eigendecomposition residual " + format_g17(residual_)
                             + " exceeds 1e-8");
    }
}

Configuration DppSampler::operator()(SeededRng& rng) const
{
    std::size_t const n = window_.size();

    // retained eigenvectors, stored column-wise as separate vectors
    std::vector<std::vector<double>> basis;
    for (std::size_t c = 0; c < n; ++c)
    {
        double const lam = std::clamp(eig_.values[c], 0.0, 1.0);
        if (rng.uniform() < lam)
        {
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = eig_.vectors(i, c);
            basis.push_back(std::move(v));
        }
    }

    Configuration out(window_);
    std::vector<double> weight(n);
    while (!basis.empty())
    {
        // site x with probability sum_k v_k(x)^2 / |basis|
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double w = 0.0;
            if (!out.at(i))
            {
                for (auto const& v : basis)
                    w += v[i] * v[i];
            }
            weight[i] = w;
            total += w;
        }
        double u = rng.uniform() * total;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (weight[i] <= 0.0)
                continue;
            pick = i;
            if (u < weight[i])
                break;
            u -= weight[i];
        }
        if (pick == n)
            throw NumericalError("sampler: no site carries weight");
        out.set_at(pick, true);

        // eliminate the component at `pick` using the vector with the largest entry there
        std::size_t pivot = 0;
        for (std::size_t k = 1; k < basis.size(); ++k)
            if (std::abs(basis[k][pick]) > std::abs(basis[pivot][pick]))
                pivot = k;
        std::vector<double> const pv = basis[pivot];
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(pivot));
        for (auto& v : basis)
        {
            double const f = v[pick] / pv[pick];
            for (std::size_t i = 0; i < n; ++i)
                v[i] -= f * pv[i];
            v[pick] = 0.0;
        }
        // modified Gram-Schmidt on what is left
        for (std::size_t k = 0; k < basis.size(); ++k)
        {
            for (std::size_t j = 0; j < k; ++j)
            {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    dot += basis[k][i] * basis[j][i];
                for (std::size_t i = 0; i < n; ++i)
                    basis[k][i] -= dot * basis[j][i];
            }
            double norm = 0.0;
            for (double x : basis[k])
                norm += x * x;
            norm = std::sqrt(norm);
            if (norm == 0.0)
                throw NumericalError("sampler: projected basis lost rank");
            for (double& x : basis[k])
                x /= norm;
        }
    }
    return out;
}

Configuration sample(KernelMatrix const& k, SeededRng& rng)
{
    return DppSampler(k)(rng);
}

double empirical_correlation(std::span<Configuration const> samples, std::span<Site const> sites)
{
    if (samples.empty())
        throw EmptyInput("empirical_correlation: no samples");
    Window const& w = samples.front().window();
    std::vector<std::size_t> idx;
    for (Site const& s : sites)
        idx.push_back(w.offset(s));
    std::size_t hits = 0;
    for (auto const& c : samples)
    {
        require_same_window(w, c.window(), "empirical_correlation");
        bool all = true;
        for (std::size_t i : idx)
            all = all && c.at(i);
        hits += all ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::string samples_csv(std::span<Configuration const> samples)
{
    if (samples.empty())
        return "sample_index\n";
    Window const& w = samples.front().window();
    std::string out = "sample_index";
    for (std::size_t i = 0; i < w.size(); ++i)
        out += ",x=" + format_g17(w.site(i).position());
    out += '\n';
    for (std::size_t s = 0; s < samples.size(); ++s)
    {
        out += std::to_string(s);
        for (std::size_t i = 0; i < w.size(); ++i)
            out += samples[s].at(i) ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

}  // namespace kdpp
