#pragma once

namespace tipsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolVersion = "tipsim 0.1.0";

}  // namespace tipsim
