#pragma once

namespace bnaccel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bnaccel
