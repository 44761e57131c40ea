#include <cmath>
#include <cstdio>
#include <sstream>

#include "kdpp/cli.hpp"
#include "kdpp/csv.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/kernel.hpp"

namespace kdpp::cli
{

std::complex<double> parse_complex(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (c != ' ')
            s += c;
    auto fail = [&]() -> std::complex<double> {
        throw DomainError("cannot parse complex number '" + std::string(text) + "'");
    };
    if (s.empty())
        return fail();

    auto to_double = [&](std::string const& part) {
        if (part.empty() || part == "+")
            return 1.0;
        if (part == "-")
            return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(part, &used);
        }
        catch (std::logic_error const&)
        {
            fail();
        }
        if (used != part.size())
            fail();
        return v;
    };

    char const last = s.back();
    if (last != 'i' && last != 'j')
        return {to_double(s), 0.0};

    s.pop_back();
    // split at the last sign that is not leading and not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
    {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
        {
            split = i;
            break;
        }
    }
    if (split == std::string::npos)
        return {0.0, to_double(s)};
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

std::string format_complex(std::complex<double> v)
{
    if (v.imag() == 0.0)
        return format_g17(v.real());
    std::string out = format_g17(v.real());
    out += v.imag() < 0 ? "-" : "+";
    out += format_g17(std::abs(v.imag())) + "i";
    return out;
}

void RunConfig::validate() const
{
    if (!is_admissible(z, z_prime))
    {
        std::string msg = "--z/--zp: (" + format_complex(z) + ", " + format_complex(z_prime)
                          + ") is not an admissible pair";
        if (z == z_prime && z.imag() == 0.0)
            msg += "; z = z' is unsupported, try --zp " + format_g17(z.real() + 1e-6);
        throw DomainError(msg);
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw DomainError("--t-max must be positive");
    if (n_samples < 1)
        throw DomainError("--n-samples must be at least 1");
    model.proximity.validate();
}

nlohmann::ordered_json RunConfig::to_json(std::string const& timestamp) const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["z"] = format_complex(z);
    j["z_prime"] = format_complex(z_prime);
    j["window"] = window.to_string();
    j["rate_model"] = to_string(model.kind);
    j["proximity"] = model.proximity.to_string();
    j["weight"] = model.proximity.weight;
    j["t_max"] = t_max;
    j["seed"] = seed;
    j["n_samples"] = n_samples;
    j["output_dir"] = output_dir;
    j["timestamp"] = timestamp;
    return j;
}

//---------------------------------------------------------------------------//

namespace
{

void dump_string(std::string& out, std::string const& s)
{
    out += nlohmann::json(s).dump();
}

void dump_value(std::string& out, nlohmann::ordered_json const& j, bool pretty, int depth)
{
    auto newline = [&](int d) {
        if (pretty)
        {
            out += '\n';
            out.append(static_cast<std::size_t>(2 * d), ' ');
        }
    };
    switch (j.type())
    {
        case nlohmann::json::value_t::object:
        {
            if (j.empty())
            {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                if (!first)
                    out += ',';
                first = false;
                newline(depth + 1);
                dump_string(out, it.key());
                out += pretty ? ": " : ":";
                dump_value(out, it.value(), pretty, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case nlohmann::json::value_t::array:
        {
            if (j.empty())
            {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (auto const& v : j)
            {
                if (!first)
                    out += ',';
                first = false;
                newline(depth + 1);
                dump_value(out, v, pretty, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case nlohmann::json::value_t::number_float:
        {
            double const v = j.get<double>();
            out += std::isfinite(v) ? format_g17(v) : "null";
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(nlohmann::ordered_json const& j, bool pretty)
{
    std::string out;
    dump_value(out, j, pretty, 0);
    return out;
}

}  // namespace kdpp::cli
