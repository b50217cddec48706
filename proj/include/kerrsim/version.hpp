#pragma once

namespace kerrsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kerrsim
