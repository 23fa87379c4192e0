#pragma once

namespace nucleate {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nucleate
