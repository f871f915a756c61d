#include "primexp/int128.hpp"

#include <algorithm>
#include <stdexcept>

namespace primexp {

std::string to_string(uint128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

uint128 parse_uint128(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("parse_uint128: empty input");
  constexpr uint128 kMax = ~uint128{0};
  uint128 v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("parse_uint128: not a digit");
    const unsigned d = static_cast<unsigned>(c - '0');
    if (v > (kMax - d) / 10) throw std::invalid_argument("parse_uint128: overflow");
    v = v * 10 + d;
  }
  return v;
}

}  // namespace primexp
