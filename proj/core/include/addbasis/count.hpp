#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace addbasis {

// Exact nonnegative count. Representation numbers r_d(n) grow like n^(d-1),
// which leaves 64 bits behind quickly.
__extension__ typedef unsigned __int128 Count;

inline constexpr Count kCountMax = ~Count{0};

std::string to_string(Count value);
double to_double(Count value);

// Product that reports overflow instead of wrapping.
std::optional<Count> checked_mul(Count a, Count b);

// a^e, or nullopt once the result leaves 128 bits.
std::optional<Count> checked_pow(Count base, unsigned exponent);

// Number of significant bits (0 for zero).
unsigned bit_width(Count value);

}  // namespace addbasis
