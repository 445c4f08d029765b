#pragma once

namespace hurst_sde {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hurst_sde
