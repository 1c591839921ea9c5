#pragma once

#include <string_view>

namespace spindyn {

inline constexpr std::string_view kToolName = "spindyn";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace spindyn
