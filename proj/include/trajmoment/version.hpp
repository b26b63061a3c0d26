#pragma once

namespace trajmoment {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace trajmoment
