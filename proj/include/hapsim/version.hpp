#pragma once

namespace hapsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hapsim
