#include "kdpp/csv.hpp"

#include <cstdio>

namespace kdpp
{

std::string format_g17(double v)
{
    char buf[32];
    int const n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace kdpp
