#pragma once

#include <string_view>

namespace magbill {
inline constexpr std::string_view kVersion = "1.0.0";
}
