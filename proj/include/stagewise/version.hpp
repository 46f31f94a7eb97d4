#pragma once

namespace stagewise {

inline constexpr const char* kToolName = "stagewise";
inline constexpr const char* kVersion = "1.0.0";

} // namespace stagewise
