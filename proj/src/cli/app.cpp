#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "kdpp/cli.hpp"
#include "kdpp/csv.hpp"
#include "kdpp/dpp.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/exact.hpp"
#include "kdpp/kernel.hpp"
#include "kdpp/rn.hpp"

namespace kdpp::cli
{
namespace
{

/// Input validation failures map to exit code 1.
class UsageError : public Error
{
  public:
    using Error::Error;
};

std::string utc_timestamp()
{
    auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

unsigned thread_cap()
{
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (char const* env = std::getenv("KAWASAKI_DPP_THREADS"))
    {
        try
        {
            long const v = std::stol(env);
            if (v >= 1)
                cap = static_cast<unsigned>(v);
        }
        catch (std::logic_error const&)
        {
        }
    }
    return cap;
}

class Output
{
  public:
    Output(std::string dir, std::ostream& out) : dir_(std::move(dir)), out_(out)
    {
        if (!dir_.empty())
            std::filesystem::create_directories(dir_);
    }

    [[nodiscard]] bool to_files() const { return !dir_.empty(); }

    /// Primary result: a file in the output directory, else stdout.
    void emit(std::string const& name, std::string const& content)
    {
        if (dir_.empty())
        {
            out_ << content;
            return;
        }
        write_file(name, content);
        out_ << "wrote " << (std::filesystem::path(dir_) / name).string() << '\n';
    }

    void write_file(std::string const& name, std::string const& content) const
    {
        std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
        if (!f)
            throw Error("cannot write " + name + " in " + dir_);
        f << content;
    }

  private:
    std::string dir_;
    std::ostream& out_;
};

struct RawOptions
{
    std::string z = "1.5";
    std::string zp = "1.7";
    std::string window = "-4..4";
    std::string model = "metropolis";
    std::string proximity = "nn";
    double weight = 1.0;

    // rn
    std::int64_t x = 0;
    std::int64_t y = 1;
    bool has_x = false;
    bool has_y = false;
    std::string gamma;
    std::string pattern;
    std::vector<std::size_t> sizes;

    // simulate
    std::string initial;
    std::string phi_window;
    std::size_t replicas = 1;

    // spectrum
    std::optional<std::size_t> sector;

    // verify
    std::string suite = "all";
};

template <class F>
auto flag_value(char const* flag, F&& parse)
{
    try
    {
        return parse();
    }
    catch (DomainError const& e)
    {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

RunConfig resolve(std::string const& command, RawOptions const& raw, RunConfig cfg)
{
    cfg.command = command;
    cfg.z = flag_value("--z", [&] { return parse_complex(raw.z); });
    cfg.z_prime = flag_value("--zp", [&] { return parse_complex(raw.zp); });
    cfg.window = flag_value("--window", [&] { return Window::parse(raw.window); });
    cfg.model.kind = flag_value("--model", [&] { return parse_rate_kind(raw.model); });
    cfg.model.proximity =
        flag_value("--proximity", [&] { return ProximitySpec::parse(raw.proximity, raw.weight); });
    if (command != "admissible")
    {
        try
        {
            cfg.validate();
        }
        catch (DomainError const& e)
        {
            throw UsageError(e.what());
        }
    }
    return cfg;
}

Configuration parse_occupancy(Window const& w, std::string const& text, char const* flag)
{
    try
    {
        return Configuration::from_string(w, text);
    }
    catch (Error const& e)
    {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

// "idx:occ,idx:occ"
SitePattern parse_pattern(std::string const& text)
{
    SitePattern out;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        std::size_t const comma = std::min(text.find(',', pos), text.size());
        std::string const item = text.substr(pos, comma - pos);
        std::size_t const colon = item.find(':');
        try
        {
            if (colon == std::string::npos)
                throw std::invalid_argument("missing ':'");
            std::size_t used = 0;
            std::int64_t const idx = std::stoll(item.substr(0, colon), &used);
            std::string const occ = item.substr(colon + 1);
            if (used != colon || (occ != "0" && occ != "1"))
                throw std::invalid_argument("bad item");
            out.emplace_back(Site{idx}, occ == "1");
        }
        catch (std::logic_error const&)
        {
            throw UsageError("--pattern: expected idx:0|1 items, got '" + item + "'");
        }
        pos = comma + 1;
    }
    return out;
}

SwapPair swap_from(RawOptions const& raw, Window const& w)
{
    Site const x = raw.has_x ? Site{raw.x} : w.lo();
    Site const y = raw.has_y ? Site{raw.y} : w.hi();
    if (x == y)
        throw UsageError("--x/--y: swap needs two distinct sites");
    if (!w.contains(x) || !w.contains(y))
        throw UsageError("--x/--y: sites must lie in the window");
    return {x, y};
}

//---------------------------------------------------------------------------//

int cmd_admissible(RunConfig const& cfg, Output& out)
{
    out.emit("admissible.txt", is_admissible(cfg.z, cfg.z_prime) ? "true\n" : "false\n");
    return 0;
}

int cmd_kernel(RunConfig const& cfg, Output& out)
{
    out.emit("kernel.csv", kernel_csv(kernel_matrix(AdmissiblePair(cfg.z, cfg.z_prime), cfg.window)));
    return 0;
}

int cmd_sample(RunConfig const& cfg, Output& out)
{
    KernelMatrix const k = kernel_matrix(AdmissiblePair(cfg.z, cfg.z_prime), cfg.window);
    DppSampler const sampler(k);
    SeededRng rng(cfg.seed);
    std::vector<Configuration> samples;
    samples.reserve(cfg.n_samples);
    for (std::size_t i = 0; i < cfg.n_samples; ++i)
        samples.push_back(sampler(rng));
    out.emit("samples.csv", samples_csv(samples));
    return 0;
}

int cmd_exact_probs(RunConfig const& cfg, Output& out)
{
    KernelMatrix const k = kernel_matrix(AdmissiblePair(cfg.z, cfg.z_prime), cfg.window);
    out.emit("pmf.csv", pmf_csv(enumerate_distribution(k)));
    return 0;
}

int cmd_rn(RunConfig const& cfg, RawOptions const& raw, Output& out)
{
    AdmissiblePair const p(cfg.z, cfg.z_prime);
    if (!raw.sizes.empty())
    {
        Site const x{raw.has_x ? raw.x : 0};
        Site const y{raw.has_y ? raw.y : 1};
        if (x == y)
            throw UsageError("--x/--y: swap needs two distinct sites");
        SitePattern pattern = raw.pattern.empty() ? SitePattern{{x, true}, {y, false}}
                                                  : parse_pattern(raw.pattern);
        StabilizationOptions opts;
        opts.samples_per_size = cfg.n_samples;
        opts.threads = thread_cap();
        auto const rows = rn_stabilization(p, pattern, SwapPair(x, y), raw.sizes, SeededRng(cfg.seed), opts);
        out.emit("rn_stabilization.csv", stabilization_csv(rows));
        return 0;
    }

    KernelMatrix const k = kernel_matrix(p, cfg.window);
    SwapPair const s = swap_from(raw, cfg.window);
    Configuration gamma(cfg.window);
    if (!raw.gamma.empty())
    {
        gamma = parse_occupancy(cfg.window, raw.gamma, "--gamma");
    }
    else
    {
        SeededRng rng(cfg.seed);
        gamma = sample(k, rng);
    }
    double const phi = rn_derivative(k, gamma, s);
    double const back = rn_derivative(k, apply_transposition(gamma, s), s);
    std::string csv = "gamma,x,y,phi,phi_swapped\n";
    csv += gamma.to_string() + "," + format_g17(s.x().position()) + ","
           + format_g17(s.y().position()) + "," + format_g17(phi) + "," + format_g17(back) + "\n";
    out.emit("rn.csv", csv);
    return 0;
}

std::string trajectory_sidecar(RunConfig const& cfg, Trajectory const& t)
{
    nlohmann::ordered_json j;
    j["seed"] = t.seed;
    j["z"] = format_complex(cfg.z);
    j["z_prime"] = format_complex(cfg.z_prime);
    j["window"] = cfg.window.to_string();
    j["rate_model"] = to_string(cfg.model.kind);
    j["proximity"] = cfg.model.proximity.to_string();
    j["t_max"] = t.t_max;
    if (t.initial.size() <= 64)
        j["initial_bitmask"] = t.initial.bitmask();
    else
        j["initial_bitmask"] = nullptr;
    j["initial_occupancy"] = t.initial.to_string();
    j["n_events"] = t.events.size();
    j["absorbed"] = t.absorbed;
    return dump_json(j) + "\n";
}

int cmd_simulate(RunConfig const& cfg, RawOptions const& raw, Output& out, std::ostream& err)
{
    if (raw.replicas < 1)
        throw UsageError("--replicas must be at least 1");
    if (raw.replicas > 1 && !out.to_files())
        throw UsageError("--replicas > 1 needs --out");

    AdmissiblePair const p(cfg.z, cfg.z_prime);
    KernelMatrix const k = kernel_matrix(p, cfg.window);
    SimulationOptions opts;
    if (!raw.phi_window.empty())
    {
        Window pw = Window::from_indices(0, 0);
        try
        {
            pw = Window::parse(raw.phi_window);
        }
        catch (DomainError const& e)
        {
            throw UsageError(std::string("--phi-window: ") + e.what());
        }
        if (!pw.contains(cfg.window))
            throw UsageError("--phi-window must enclose --window");
        opts.phi_kernel = kernel_matrix(p, pw);
    }
    std::optional<Configuration> fixed_initial;
    if (!raw.initial.empty())
        fixed_initial = parse_occupancy(cfg.window, raw.initial, "--initial");

    std::vector<std::optional<Trajectory>> results(raw.replicas);
    std::vector<std::exception_ptr> errors(raw.replicas);
    DppSampler const sampler(k);
    auto work = [&](std::size_t r) {
        try
        {
            SeededRng rng = SeededRng(cfg.seed).split(r);
            Configuration init = fixed_initial ? *fixed_initial : Configuration(cfg.window);
            if (!fixed_initial)
            {
                SeededRng init_rng = rng.split(1);
                init = sampler(init_rng);
            }
            results[r] = simulate(cfg.model, k, init, cfg.t_max, rng, opts);
        }
        catch (...)
        {
            errors[r] = std::current_exception();
        }
    };
    unsigned const cap = thread_cap();
    for (std::size_t start = 0; start < raw.replicas; start += cap)
    {
        std::vector<std::jthread> pool;
        for (std::size_t r = start; r < std::min<std::size_t>(raw.replicas, start + cap); ++r)
            pool.emplace_back(work, r);
    }
    for (auto const& e : errors)
        if (e)
            std::rethrow_exception(e);

    for (std::size_t r = 0; r < raw.replicas; ++r)
    {
        std::string const stem = raw.replicas == 1 ? "trajectory" : "trajectory_" + std::to_string(r);
        Trajectory const& t = *results[r];
        out.emit(stem + ".csv", trajectory_csv(t));
        if (out.to_files())
            out.write_file(stem + ".json", trajectory_sidecar(cfg, t));
        else
            err << trajectory_sidecar(cfg, t);
    }
    return 0;
}

int cmd_spectrum(RunConfig const& cfg, RawOptions const& raw, Output& out)
{
    KernelMatrix const k = kernel_matrix(AdmissiblePair(cfg.z, cfg.z_prime), cfg.window);
    GeneratorMatrix const g = build_generator(cfg.model, k, raw.sector);
    Spectrum const s = spectrum(g);
    nlohmann::ordered_json j;
    j["window"] = cfg.window.to_string();
    if (raw.sector)
        j["sector"] = *raw.sector;
    else
        j["sector"] = nullptr;
    j["model"] = to_string(cfg.model.kind);
    j["eigenvalues"] = s.eigenvalues;
    j["spectral_gap"] = s.spectral_gap;
    out.emit("spectrum.json", dump_json(j) + "\n");
    return 0;
}

int cmd_verify(RunConfig const& cfg, RawOptions const& raw, Output& out)
{
    VerifyReport const rep = run_verify_suite(raw.suite, cfg);
    out.emit("verify_report.json", dump_json(rep.to_json()) + "\n");
    return rep.failures() == 0 ? 0 : 2;
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Gamma-kernel determinantal point process and Kawasaki swap dynamics"};
    app.name("kawasaki_dpp");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file; command-line flags take precedence");

    RawOptions raw;
    RunConfig cfg;
    app.add_option("--z", raw.z, "parameter z, real or a+bi")->capture_default_str();
    app.add_option("--zp", raw.zp, "parameter z', real or a-bi")->capture_default_str();
    app.add_option("--window", raw.window, "site indices lo..hi (site x = index + 1/2)")
        ->capture_default_str();
    app.add_option("--model", raw.model, "metropolis | sqrt-ratio | glauber-like")->capture_default_str();
    app.add_option("--proximity", raw.proximity, "nn | exp:<alpha> | range:<r>")->capture_default_str();
    app.add_option("--weight", raw.weight, "proximity weight")->capture_default_str();
    app.add_option("--t-max", cfg.t_max, "simulation horizon")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--n-samples", cfg.n_samples, "number of samples")->capture_default_str();
    app.add_option("--out", cfg.output_dir, "write outputs into this directory");

    auto* admissible = app.add_subcommand("admissible", "test (z, z') for admissibility");
    auto* kernel = app.add_subcommand("kernel", "kernel matrix CSV on the window");
    auto* sample_cmd = app.add_subcommand("sample", "exact DPP samples CSV");
    auto* exact_probs = app.add_subcommand("exact-probs", "enumerated configuration law CSV");

    auto* rn = app.add_subcommand("rn", "swap ratio, or its stabilization table with --sizes");
    rn->add_option("--x", raw.x, "first swapped site index");
    rn->add_option("--y", raw.y, "second swapped site index");
    rn->add_option("--gamma", raw.gamma, "occupancy string over the window, e.g. 0110");
    rn->add_option("--pattern", raw.pattern, "fixed sites idx:0|1,... for --sizes");
    rn->add_option("--sizes", raw.sizes, "window sizes for the stabilization table")->delimiter(',');

    auto* sim = app.add_subcommand("simulate", "Gillespie trajectory of the swap dynamics");
    sim->add_option("--initial", raw.initial, "initial occupancy string (default: DPP draw)");
    sim->add_option("--phi-window", raw.phi_window, "enclosing window lo..hi for rate ratios");
    sim->add_option("--replicas", raw.replicas, "independent replicas")->capture_default_str();

    auto* spec = app.add_subcommand("spectrum", "spectrum of the symmetrized generator");
    spec->add_option("--sector", raw.sector, "particle number sector");

    auto* verify = app.add_subcommand("verify", "run a bundled verification suite");
    verify->add_option("--suite", raw.suite, "kernel | dpp | rn | dynamics | exact | all")
        ->check(CLI::IsMember({"kernel", "dpp", "rn", "dynamics", "exact", "all"}))
        ->capture_default_str();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return 0;
    }
    catch (CLI::CallForAllHelp const&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    raw.has_x = rn->count("--x") > 0;
    raw.has_y = rn->count("--y") > 0;

    CLI::App* sub = app.get_subcommands().front();
    std::string const command = sub->get_name();

    try
    {
        cfg = resolve(command, raw, cfg);
        std::string const echo = dump_json(cfg.to_json(utc_timestamp()));
        Output output(cfg.output_dir, out);
        err << echo << '\n';
        if (output.to_files())
            output.write_file("run_config.json", echo + "\n");

        if (sub == admissible)
            return cmd_admissible(cfg, output);
        if (sub == kernel)
            return cmd_kernel(cfg, output);
        if (sub == sample_cmd)
            return cmd_sample(cfg, output);
        if (sub == exact_probs)
            return cmd_exact_probs(cfg, output);
        if (sub == rn)
            return cmd_rn(cfg, raw, output);
        if (sub == sim)
            return cmd_simulate(cfg, raw, output, err);
        if (sub == spec)
            return cmd_spectrum(cfg, raw, output);
        if (sub == verify)
            return cmd_verify(cfg, raw, output);
    }
    catch (UsageError const& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace kdpp::cli
