#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kdpp/dynamics.hpp"
#include "kdpp/lattice.hpp"

namespace kdpp::cli
{

/// Parses "a", "a+bi", "a-bi", "bi" (also with 'j').
[[nodiscard]] std::complex<double> parse_complex(std::string_view text);
[[nodiscard]] std::string format_complex(std::complex<double> v);

/// Fully resolved parameters of one CLI run.
struct RunConfig
{
    std::string command;
    std::complex<double> z{1.5, 0.0};
    std::complex<double> z_prime{1.7, 0.0};
    Window window = Window::from_indices(-4, 4);
    RateModel model;
    double t_max = 10.0;
    std::uint64_t seed = 0;
    std::size_t n_samples = 1000;
    std::string output_dir;

    /// Throws DomainError on a violated invariant.
    void validate() const;
    /// Echo; the timestamp lives under its own key and is the only
    /// non-reproducible field.
    [[nodiscard]] nlohmann::ordered_json to_json(std::string const& timestamp) const;
};

/// JSON text with every floating value printed as %.17g; two-space indent
/// when `pretty`, single line otherwise.
[[nodiscard]] std::string dump_json(nlohmann::ordered_json const& j, bool pretty = true);

struct Check
{
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

struct VerifyReport
{
    std::string suite;
    std::vector<Check> checks;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

inline constexpr char const* kSuites[] = {"kernel", "dpp", "rn", "dynamics", "exact", "all"};

/// Runs a bundled verification suite on the window and parameters of `cfg`.
[[nodiscard]] VerifyReport run_verify_suite(std::string const& suite, RunConfig const& cfg);

/// Entry point: returns 0 on success, 1 on usage errors, 2 on numerical or
/// verification failures.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace kdpp::cli
