#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "addbasis/count.hpp"

namespace addbasis {

struct NttPrime {
  std::uint64_t modulus;
  std::uint64_t generator;  // primitive root
};

// All below 2^62 so Montgomery products never overflow 128 bits; each supports
// transforms of length 2^46 or more.
inline constexpr std::array<NttPrime, 3> kNttPrimes{{
    {4179340454199820289ULL, 3},   // 29 * 2^57 + 1
    {1945555039024054273ULL, 5},   // 27 * 2^56 + 1
    {4611615649683210241ULL, 11},  // 65535 * 2^46 + 1
}};

// coefficients of P(z)^exponent mod `prime`, truncated to `keep` terms, where
// P has 0/1 coefficients given by `indicator`.
std::vector<std::uint64_t> power_mod(std::span<const std::uint8_t> indicator, unsigned exponent,
                                     std::size_t keep, const NttPrime& prime);

// Product of two residue vectors mod `prime`, truncated to `keep` terms.
std::vector<std::uint64_t> multiply_mod(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b, std::size_t keep,
                                        const NttPrime& prime);

// Chinese remaindering of residues[i][n] modulo the first residues.size()
// primes. Exact for true values below the product of those primes and 2^128.
std::vector<Count> crt_combine(std::span<const std::vector<std::uint64_t>> residues);

}  // namespace addbasis
