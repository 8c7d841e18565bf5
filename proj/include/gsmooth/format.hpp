#pragma once

#include <string>

namespace gsmooth {

// Shortest round-trip decimal form, independent of the global locale.
// Non-finite values print as nan, inf and -inf.
std::string format_double(double v);

}  // namespace gsmooth
