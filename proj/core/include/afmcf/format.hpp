#pragma once

#include <string>

namespace afmcf {

/// Round-trip-safe float formatting (17 significant digits) used by every
/// CSV/JSON artifact.
std::string fmt17(double v);

} // namespace afmcf
