#pragma once

namespace evcharge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evcharge
