#pragma once

namespace afmcf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace afmcf
