#include <algorithm>
#include <cmath>
#include <limits>

#include "kdpp/cli.hpp"
#include "kdpp/dpp.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/exact.hpp"
#include "kdpp/kernel.hpp"
#include "kdpp/rn.hpp"

namespace kdpp::cli
{
namespace
{

class Recorder
{
  public:
    explicit Recorder(VerifyReport& rep) : rep_(rep) {}

    /// Passes when value <= tolerance.
    void at_most(std::string name, double value, double tol)
    {
        rep_.checks.push_back({std::move(name), value <= tol, value, tol});
    }
    /// Passes when value >= tolerance.
    void at_least(std::string name, double value, double tol)
    {
        rep_.checks.push_back({std::move(name), value >= tol, value, tol});
    }
    void flag(std::string name, bool ok)
    {
        rep_.checks.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0});
    }
    /// Diagnostic value; passes iff finite.
    void finite(std::string name, double value)
    {
        rep_.checks.push_back({std::move(name), std::isfinite(value), value,
                               std::numeric_limits<double>::max()});
    }

  private:
    VerifyReport& rep_;
};

constexpr std::size_t kEnumerationCap = 12;

void require_small(Window const& w, std::size_t cap, char const* suite)
{
    if (w.size() > cap)
    {
        throw SizeError(std::string("verify ") + suite + ": window limited to "
                        + std::to_string(cap) + " sites");
    }
}

std::vector<RateModel> all_models(ProximitySpec const& prox)
{
    return {{RateKind::Metropolis, prox}, {RateKind::SqrtRatio, prox}, {RateKind::GlauberLike, prox}};
}

void kernel_suite(RunConfig const& cfg, Recorder& rec)
{
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    std::size_t const n = k.size();

    rec.at_most("kernel.symmetry", linalg::asymmetry(k.entries()), 1e-12);
    double dmin = 1.0;
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        dmin = std::min(dmin, k(i, i));
        dmax = std::max(dmax, k(i, i));
    }
    rec.flag("kernel.diagonal_in_open_unit_interval", dmin > 0.0 && dmax < 1.0);

    auto const eig = linalg::jacobi_eigen(k.entries());
    rec.at_least("kernel.min_eigenvalue", eig.values.front(), -1e-9);
    rec.at_most("kernel.max_eigenvalue", eig.values.back(), 1.0 + 1e-9);
    double eig_sum = 0.0;
    for (double v : eig.values)
        eig_sum += v;
    rec.at_most("kernel.trace_vs_eigenvalue_sum", std::abs(eig_sum - k.trace()), 1e-10);

    double ab = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        auto const v = ab_values(p, cfg.window.site(i));
        ab = std::max(ab, std::abs(v.a * v.b - 1.0));
    }
    rec.at_most("kernel.ab_identity", ab, 1e-12);

    // principal minors of size <= 4 on the first 12 sites
    std::size_t const m = std::min<std::size_t>(n, 12);
    double worst = std::numeric_limits<double>::max();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask)
    {
        if (__builtin_popcountll(mask) > 4)
            continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < m; ++i)
            if ((mask >> i) & 1u)
                idx.push_back(i);
        worst = std::min(worst, linalg::determinant(linalg::principal_submatrix(k.entries(), idx)));
    }
    rec.at_least("kernel.min_principal_minor", worst, -1e-10);

    double prev = std::numeric_limits<double>::max();
    bool monotone = true;
    double comm = 0.0;
    for (std::size_t size : {40u, 60u, 80u})
    {
        auto const rep = spectral_projection_check(p, Window::with_size(-static_cast<std::int64_t>(size) / 2, size),
                                                   (size - 10) / 2);
        monotone = monotone && rep.max_abs_deviation < prev;
        prev = rep.max_abs_deviation;
        comm = std::max(comm, rep.commutator_norm);
    }
    rec.flag("kernel.projection_deviation_decreasing", monotone);
    rec.at_most("kernel.commutator_interior", comm, 1e-10);
}

void dpp_suite(RunConfig const& cfg, Recorder& rec)
{
    require_small(cfg.window, kEnumerationCap, "dpp");
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    Pmf const pmf = enumerate_distribution(k);
    Window const& w = cfg.window;

    rec.at_most("dpp.normalization", std::abs(pmf.total() - 1.0), 1e-9);
    double min_p = std::numeric_limits<double>::max();
    for (double v : pmf.probs())
        min_p = std::min(min_p, v);
    rec.at_least("dpp.min_probability", min_p, -1e-12);
    rec.finite("dpp.clamped_entries", static_cast<double>(pmf.clamped()));

    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        Site const a[] = {w.site(i)};
        m1 = std::max(m1, std::abs(pmf.marginal(a) - k(i, i)));
        for (std::size_t j = i + 1; j < w.size(); ++j)
        {
            Site const ab[] = {w.site(i), w.site(j)};
            m2 = std::max(m2, std::abs(pmf.marginal(ab) - correlation(k, ab)));
        }
    }
    rec.at_most("dpp.single_marginals", m1, 1e-10);
    rec.at_most("dpp.pair_marginals", m2, 1e-10);

    // sampler: particle count mean within 4 sigma of trace(K)
    DppSampler const sampler(k);
    SeededRng rng(cfg.seed);
    double count = 0.0;
    for (std::size_t s = 0; s < cfg.n_samples; ++s)
        count += static_cast<double>(sampler(rng).particle_count());
    double var = 0.0;
    for (double lam : sampler.eigenvalues())
        var += std::clamp(lam, 0.0, 1.0) * (1.0 - std::clamp(lam, 0.0, 1.0));
    double const se = std::sqrt(var / static_cast<double>(cfg.n_samples));
    double const z = std::abs(count / static_cast<double>(cfg.n_samples) - k.trace()) / std::max(se, 1e-300);
    rec.at_most("dpp.sampler_mean_count_sigmas", z, 4.0);
}

void rn_suite(RunConfig const& cfg, Recorder& rec)
{
    require_small(cfg.window, kEnumerationCap, "rn");
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    Window const& w = cfg.window;
    SwapPair const s(w.lo(), w.hi());

    double inv = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << w.size()); ++m)
    {
        Configuration const g = Configuration::from_bitmask(w, m);
        if (!(config_probability(k, g) > 0.0))
            continue;
        double const a = rn_derivative(k, g, s);
        double const b = rn_derivative(k, apply_transposition(g, s), s);
        inv = std::max(inv, std::abs(a * b - 1.0));
    }
    rec.at_most("rn.inversion", inv, 1e-9);
    auto const mom = rn_moments(k, s);
    rec.at_most("rn.change_of_variables", std::abs(mom.first - 1.0), 1e-9);
    rec.finite("rn.second_moment", mom.second);
}

void dynamics_suite(RunConfig const& cfg, Recorder& rec)
{
    require_small(cfg.window, 10, "dynamics");
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    Window const& w = cfg.window;

    for (auto const& model : all_models(cfg.model.proximity))
    {
        std::string const tag = "dynamics." + to_string(model.kind);
        double db = 0.0;
        double fact = 0.0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << w.size()); ++m)
        {
            Configuration const g = Configuration::from_bitmask(w, m);
            for (std::size_t i = 0; i < w.size(); ++i)
            {
                for (std::size_t j = i + 1; j < w.size(); ++j)
                {
                    if (g.at(i) == g.at(j))
                        continue;
                    SwapPair const s(w.site(i), w.site(j));
                    Configuration const sg = apply_transposition(g, s);
                    double const fwd = config_probability(k, g) * rate(model, k, g, s);
                    double const bwd = config_probability(k, sg) * rate(model, k, sg, s);
                    double const scale = std::max({fwd, bwd, 1e-300});
                    db = std::max(db, symmetry_check(model, k, g, s) / scale);
                    double const a = swap_invariant_amplitude(model, k, g, s);
                    double const b = swap_invariant_amplitude(model, k, sg, s);
                    fact = std::max(fact, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
                }
            }
        }
        rec.at_most(tag + ".detailed_balance", db, 1e-10);
        rec.at_most(tag + ".factorization", fact, 1e-10);
        auto const mom = rate_moments(model, k, w.site(w.size() / 2));
        rec.finite(tag + ".l1_total_rate", mom.l1);
        rec.finite(tag + ".l2_total_rate", mom.l2);
    }

    RateModel const nn{cfg.model.kind, ProximitySpec::nearest_neighbor(cfg.model.proximity.weight)};
    bool connected = true;
    for (std::size_t c = 0; c <= w.size(); ++c)
        connected = connected && is_connected(build_generator(nn, k, c));
    rec.flag("dynamics.nn_sectors_connected", connected);

    Configuration const init = sector_states(w, w.size() / 2).front();
    auto const a = simulate(cfg.model, k, init, 5.0, SeededRng(cfg.seed));
    auto const b = simulate(cfg.model, k, init, 5.0, SeededRng(cfg.seed));
    rec.flag("dynamics.seed_determinism", trajectory_csv(a) == trajectory_csv(b));
}

void exact_suite(RunConfig const& cfg, Recorder& rec)
{
    require_small(cfg.window, 10, "exact");
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    Window const& w = cfg.window;
    SeededRng rng(cfg.seed);

    for (auto const& model : all_models(cfg.model.proximity))
    {
        std::string const tag = "exact." + to_string(model.kind);
        double cons = 0.0;
        double rev = 0.0;
        double stat = 0.0;
        double form = 0.0;
        double top_eig = -std::numeric_limits<double>::max();
        double zero_eig = std::numeric_limits<double>::max();
        double semi_rows = 0.0;
        double semi_min = std::numeric_limits<double>::max();
        for (std::size_t c = 0; c <= w.size(); ++c)
        {
            GeneratorMatrix const g = build_generator(model, k, c);
            cons = std::max(cons, conservativity_residual(g));
            rev = std::max(rev, check_reversibility(g));
            stat = std::max(stat, stationarity_residual(g));
            for (int trial = 0; trial < 5; ++trial)
            {
                std::vector<double> f(g.size());
                std::vector<double> h(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                {
                    f[i] = 2.0 * rng.uniform() - 1.0;
                    h[i] = 2.0 * rng.uniform() - 1.0;
                }
                form = std::max(form, std::abs(dirichlet_form(g, f, h) - generator_form(g, f, h)));
            }
            auto const spec = spectrum(g);
            top_eig = std::max(top_eig, spec.eigenvalues.front());
            zero_eig = std::min(zero_eig, std::abs(spec.eigenvalues.front()));
            for (double t : {0.1, 1.0, 10.0})
            {
                auto const e = semigroup(g, t);
                for (std::size_t i = 0; i < e.rows(); ++i)
                {
                    double row = 0.0;
                    for (std::size_t j = 0; j < e.cols(); ++j)
                    {
                        row += e(i, j);
                        semi_min = std::min(semi_min, e(i, j));
                    }
                    semi_rows = std::max(semi_rows, std::abs(row - 1.0));
                }
            }
        }
        rec.at_most(tag + ".conservativity", cons, 1e-12);
        rec.at_most(tag + ".reversibility", rev, 1e-10);
        rec.at_most(tag + ".stationarity", stat, 1e-10);
        rec.at_most(tag + ".dirichlet_form_identity", form, 1e-10);
        rec.at_most(tag + ".max_eigenvalue", top_eig, 1e-10);
        rec.at_most(tag + ".zero_eigenvalue", zero_eig, 1e-10);
        rec.at_most(tag + ".semigroup_row_sums", semi_rows, 1e-9);
        rec.at_least(tag + ".semigroup_min_entry", semi_min, -1e-9);
    }
}

}  // namespace

std::size_t VerifyReport::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](Check const& c) { return !c.passed; }));
}

nlohmann::ordered_json VerifyReport::to_json() const
{
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["checks"] = nlohmann::ordered_json::array();
    for (auto const& c : checks)
    {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["value"] = c.value;
        e["tolerance"] = c.tolerance;
        j["checks"].push_back(std::move(e));
    }
    j["failures"] = failures();
    return j;
}

VerifyReport run_verify_suite(std::string const& suite, RunConfig const& cfg)
{
    VerifyReport rep;
    rep.suite = suite;
    Recorder rec(rep);
    bool const all = suite == "all";
    bool known = all;
    if (all || suite == "kernel")
    {
        kernel_suite(cfg, rec);
        known = true;
    }
    if (all || suite == "dpp")
    {
        dpp_suite(cfg, rec);
        known = true;
    }
    if (all || suite == "rn")
    {
        rn_suite(cfg, rec);
        known = true;
    }
    if (all || suite == "dynamics")
    {
        dynamics_suite(cfg, rec);
        known = true;
    }
    if (all || suite == "exact")
    {
        exact_suite(cfg, rec);
        known = true;
    }
    if (!known)
        throw DomainError("unknown suite '" + suite + "'");
    return rep;
}

}  // namespace kdpp::cli
