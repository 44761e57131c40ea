#pragma once

#include <string>

namespace kdpp
{

/// printf("%.17g") formatting used for every floating value written out.
[[nodiscard]] std::string format_g17(double v);

}  // namespace kdpp
