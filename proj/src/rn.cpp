#include "kdpp/rn.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kdpp/csv.hpp"
#include "kdpp/errors.hpp"

namespace kdpp
{

namespace
{
constexpr double kMinProbability = 1e-300;
}

Configuration apply_transposition(Configuration const& gamma, SwapPair const& s)
{
    Window const& w = gamma.window();
    std::size_t const ix = w.offset(s.x());
    std::size_t const iy = w.offset(s.y());
    Configuration out = gamma;
    out.set_at(ix, gamma.at(iy));
    out.set_at(iy, gamma.at(ix));
    return out;
}

double rn_derivative(KernelMatrix const& k, Configuration const& gamma, SwapPair const& s)
{
    Configuration const swapped = apply_transposition(gamma, s);
    if (swapped == gamma)
        return 1.0;
    double const den = config_probability(k, gamma);
    if (den < kMinProbability)
        throw ZeroProbability("rn_derivative: P(gamma) = " + format_g17(den));
    return config_probability(k, swapped) / den;
}

//---------------------------------------------------------------------------//

SwapRatioEvaluator::SwapRatioEvaluator(KernelMatrix const& k, Configuration const& gamma)
    : window_(k.window()), occ_(gamma.occupancy())
{
    require_same_window(k.window(), gamma.window(), "SwapRatioEvaluator");
    std::size_t const n = k.size();
    linalg::Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m(i, j) = occ_[j] ? k(i, j) : (i == j ? 1.0 : 0.0) - k(i, j);
    linalg::LuDecomposition lu(std::move(m));
    probability_ = lu.determinant();
    if (std::abs(probability_) < kMinProbability || lu.singular())
        throw ZeroProbability("SwapRatioEvaluator: P(gamma) = " + format_g17(probability_));
    inverse_ = lu.inverse();
}

double SwapRatioEvaluator::operator()(std::size_t ix, std::size_t iy) const
{
    if (occ_[ix] == occ_[iy])
        return 1.0;
    double const r = (inverse_(ix, ix) - 1.0) * (inverse_(iy, iy) - 1.0)
                     - inverse_(ix, iy) * inverse_(iy, ix);
    return std::max(r, 0.0);
}

double SwapRatioEvaluator::operator()(SwapPair const& s) const
{
    return (*this)(window_.offset(s.x()), window_.offset(s.y()));
}

RnMoments rn_moments(KernelMatrix const& k, SwapPair const& s)
{
    Pmf const pmf = enumerate_distribution(k);
    RnMoments out;
    for (std::uint64_t m = 0; m < pmf.probs().size(); ++m)
    {
        double const p = pmf[m];
        if (p < kMinProbability)
            continue;
        double const phi = rn_derivative(k, Configuration::from_bitmask(k.window(), m), s);
        out.first += p * phi;
        out.second += p * phi * phi;
    }
    return out;
}

//---------------------------------------------------------------------------//

Window stabilization_window(SitePattern const& pattern, SwapPair const& s, std::size_t size)
{
    std::int64_t lo = std::min(s.x().index, s.y().index);
    std::int64_t hi = std::max(s.x().index, s.y().index);
    for (auto const& [site, occ] : pattern)
    {
        lo = std::min(lo, site.index);
        hi = std::max(hi, site.index);
    }
    auto const span = static_cast<std::size_t>(hi - lo + 1);
    if (size < span)
    {
        throw SizeError("stabilization window of " + std::to_string(size)
                        + " sites cannot hold the pattern span of " + std::to_string(span));
    }
    auto const slack = static_cast<std::int64_t>(size - span);
    return Window::with_size(lo - slack / 2, size);
}

namespace
{

bool matches(Configuration const& c, SitePattern const& pattern)
{
    for (auto const& [site, occ] : pattern)
        if (c.occupied(site) != occ)
            return false;
    return true;
}

StabilizationRow stabilize_one(AdmissiblePair const& p, SitePattern const& pattern,
                               SwapPair const& s, std::size_t size, SeededRng rng,
                               StabilizationOptions const& opts)
{
    StabilizationRow row;
    row.window_size = size;
    row.window = stabilization_window(pattern, s, size);
    KernelMatrix const k = kernel_matrix(p, row.window);
    DppSampler const sampler(k);

    std::vector<double> phis;
    phis.reserve(opts.samples_per_size);
    while (phis.size() < opts.samples_per_size)
    {
        std::size_t attempts = 0;
        Configuration gamma(row.window);
        do
        {
            if (attempts++ >= opts.max_attempts)
            {
                throw PatternTooRare("rn_stabilization: no sample matched the pattern after "
                                     + std::to_string(opts.max_attempts) + " attempts");
            }
            gamma = sampler(rng);
        } while (!matches(gamma, pattern));

        double const phi = rn_derivative(k, gamma, s);
        double const back = rn_derivative(k, apply_transposition(gamma, s), s);
        row.max_inversion_residual = std::max(row.max_inversion_residual, std::abs(phi * back - 1.0));
        phis.push_back(phi);
    }

    double mean = 0.0;
    for (double v : phis)
        mean += v;
    mean /= static_cast<double>(phis.size());
    double var = 0.0;
    for (double v : phis)
        var += (v - mean) * (v - mean);
    if (phis.size() > 1)
        var /= static_cast<double>(phis.size() - 1);
    row.phi_mean = mean;
    row.phi_std = std::sqrt(var);
    row.n_samples = phis.size();
    return row;
}

}  // namespace

std::vector<StabilizationRow>
rn_stabilization(AdmissiblePair const& p, SitePattern const& pattern, SwapPair const& s,
                 std::vector<std::size_t> const& window_sizes, SeededRng const& rng,
                 StabilizationOptions const& opts)
{
    bool has_x = false;
    bool has_y = false;
    for (auto const& [site, occ] : pattern)
    {
        has_x = has_x || site == s.x();
        has_y = has_y || site == s.y();
    }
    if (!has_x || !has_y)
        throw DomainError("rn_stabilization: pattern must fix both swapped sites");

    std::vector<StabilizationRow> rows(window_sizes.size());
    std::vector<std::exception_ptr> errors(window_sizes.size());
    auto work = [&](std::size_t i) {
        try
        {
            rows[i] = stabilize_one(p, pattern, s, window_sizes[i], rng.split(i), opts);
        }
        catch (...)
        {
            errors[i] = std::current_exception();
        }
    };

    unsigned const threads = std::max(1u, opts.threads);
    for (std::size_t start = 0; start < window_sizes.size(); start += threads)
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = start; i < std::min(window_sizes.size(), start + threads); ++i)
            pool.emplace_back(work, i);
    }
    for (auto const& e : errors)
        if (e)
            std::rethrow_exception(e);

    for (std::size_t i = 1; i < rows.size(); ++i)
        rows[i].delta = std::abs(rows[i].phi_mean - rows[i - 1].phi_mean);
    return rows;
}

std::string stabilization_csv(std::vector<StabilizationRow> const& rows)
{
    std::string out = "window_size,phi_mean,phi_std,n_samples\n";
    for (auto const& r : rows)
    {
        out += std::to_string(r.window_size) + "," + format_g17(r.phi_mean) + ","
               + format_g17(r.phi_std) + "," + std::to_string(r.n_samples) + "\n";
    }
    return out;
}

}  // namespace kdpp
