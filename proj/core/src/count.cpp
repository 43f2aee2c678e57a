#include "addbasis/count.hpp"

#include <algorithm>

namespace addbasis {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double to_double(Count value) {
  const auto high = static_cast<std::uint64_t>(value >> 64);
  const auto low = static_cast<std::uint64_t>(value);
  return static_cast<double>(high) * 18446744073709551616.0 + static_cast<double>(low);
}

std::optional<Count> checked_mul(Count a, Count b) {
  if (a == 0 || b == 0) return Count{0};
  if (a > kCountMax / b) return std::nullopt;
  return a * b;
}

std::optional<Count> checked_pow(Count base, unsigned exponent) {
  Count result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    auto next = checked_mul(result, base);
    if (!next) return std::nullopt;
    result = *next;
  }
  return result;
}

unsigned bit_width(Count value) {
  unsigned bits = 0;
  while (value != 0) {
    ++bits;
    value >>= 1;
  }
  return bits;
}

}  // namespace addbasis
