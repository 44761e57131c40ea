#include "kdpp/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "kdpp/errors.hpp"

namespace kdpp
{

Window::Window(Site lo, Site hi) : lo_(lo), hi_(hi)
{
    if (hi.index < lo.index)
        throw DomainError("window must contain at least one site");
}

Window Window::with_size(std::int64_t lo, std::size_t size)
{
    if (size == 0)
        throw DomainError("window must contain at least one site");
    return {Site{lo}, Site{lo + static_cast<std::int64_t>(size) - 1}};
}

std::size_t Window::offset(Site s) const
{
    if (!contains(s))
    {
        std::ostringstream os;
        os << "site " << s.index << " outside window " << to_string();
        throw WindowMismatch(os.str());
    }
    return static_cast<std::size_t>(s.index - lo_.index);
}

std::string Window::to_string() const
{
    return std::to_string(lo_.index) + ".." + std::to_string(hi_.index);
}

Window Window::parse(std::string_view text)
{
    auto const dots = text.find("..");
    if (dots == std::string_view::npos)
        throw DomainError("window must look like lo..hi, got '" + std::string(text) + "'");
    auto parse_int = [&](std::string_view part) {
        std::int64_t v = 0;
        auto const* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, v);
        if (ec != std::errc{} || ptr != end || part.empty())
            throw DomainError("bad window bound '" + std::string(part) + "'");
        return v;
    };
    return {Site{parse_int(text.substr(0, dots))}, Site{parse_int(text.substr(dots + 2))}};
}

//---------------------------------------------------------------------------//

Configuration::Configuration(Window w) : window_(w), occ_(w.size(), 0) {}

Configuration::Configuration(Window w, std::vector<std::uint8_t> occupancy)
    : window_(w), occ_(std::move(occupancy))
{
    if (occ_.size() != window_.size())
        throw WindowMismatch("occupancy length differs from window size");
    for (auto& o : occ_)
        o = o ? 1 : 0;
}

Configuration Configuration::from_bitmask(Window w, std::uint64_t mask)
{
    if (w.size() > 64)
        throw SizeError("bitmask encoding needs a window of at most 64 sites");
    Configuration c(w);
    for (std::size_t i = 0; i < w.size(); ++i)
        c.occ_[i] = (mask >> i) & 1u;
    return c;
}

Configuration Configuration::from_string(Window w, std::string_view bits)
{
    if (bits.size() != w.size())
        throw WindowMismatch("occupancy string length differs from window size");
    Configuration c(w);
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (bits[i] != '0' && bits[i] != '1')
            throw DomainError("occupancy string may only contain 0 and 1");
        c.occ_[i] = bits[i] == '1';
    }
    return c;
}

std::size_t Configuration::particle_count() const
{
    return static_cast<std::size_t>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
}

std::uint64_t Configuration::bitmask() const
{
    if (occ_.size() > 64)
        throw SizeError("bitmask encoding needs a window of at most 64 sites");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < occ_.size(); ++i)
        m |= static_cast<std::uint64_t>(occ_[i]) << i;
    return m;
}

std::string Configuration::to_string() const
{
    std::string s(occ_.size(), '0');
    for (std::size_t i = 0; i < occ_.size(); ++i)
        if (occ_[i])
            s[i] = '1';
    return s;
}

SwapPair::SwapPair(Site x, Site y) : x_(x), y_(y)
{
    if (x == y)
        throw SamePoint("swap pair needs two distinct sites");
}

void require_same_window(Window const& a, Window const& b, char const* what)
{
    if (!(a == b))
    {
        throw WindowMismatch(std::string(what) + ": window " + a.to_string()
                             + " does not match " + b.to_string());
    }
}

}  // namespace kdpp
