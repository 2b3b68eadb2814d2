#pragma once

namespace rac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rac
