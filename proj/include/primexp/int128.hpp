#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace primexp {

using uint128 = unsigned __int128;

std::string to_string(uint128 v);

// Parses a non-negative decimal string; throws std::invalid_argument on
// malformed input or overflow.
uint128 parse_uint128(std::string_view text);

// Exact double conversion helper; |error| <= 0.5 ulp of the result.
inline double to_double(uint128 v) { return static_cast<double>(v); }

}  // namespace primexp
