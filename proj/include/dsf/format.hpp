#pragma once

#include <string>

namespace dsf {

// 17 significant digits in scientific notation with a '.' separator,
// independent of the global locale.
std::string format_double(double x);

}  // namespace dsf
