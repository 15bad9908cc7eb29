#pragma once

namespace zpell {

inline constexpr const char* kToolName = "zpell";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace zpell
