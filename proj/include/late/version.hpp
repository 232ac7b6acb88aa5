#pragma once

namespace late {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace late
