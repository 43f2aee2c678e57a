#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addbasis {

// Finite truncation A ∩ [0, N] of an integer sequence. Immutable once built;
// the prefix table makes s(x; A) an O(1) lookup.
class Sequence {
 public:
  // Duplicates collapse; order is irrelevant. Throws InputError when an
  // element exceeds the horizon.
  static Sequence from_elements(std::span<const std::uint64_t> elements,
                                std::uint64_t horizon, std::string label = {});

  // indicator[n] != 0 marks n as a member; horizon = indicator.size() - 1.
  static Sequence from_indicator(std::vector<std::uint8_t> indicator,
                                 std::string label = {});

  std::uint64_t horizon() const { return horizon_; }
  const std::string& label() const { return label_; }

  bool contains(std::uint64_t n) const;

  // s(x; A) = |A ∩ [0, x]|. RangeError when x exceeds the horizon.
  std::uint64_t count_upto(std::uint64_t x) const;
  std::uint64_t count_upto_real(double x) const;  // s(floor x)

  // |A ∩ [0, N]|
  std::uint64_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  // Members in increasing order.
  std::span<const std::uint64_t> elements() const { return elements_; }
  // 0/1 membership over [0, N].
  std::span<const std::uint8_t> indicator() const { return indicator_; }

  Sequence truncated(std::uint64_t horizon) const;

 private:
  Sequence() = default;
  void build_caches();

  std::uint64_t horizon_ = 0;
  std::vector<std::uint8_t> indicator_;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::uint64_t> elements_;
  std::string label_;
};

struct SequenceKind {
  enum class Family {
    naturals,
    primes,
    kth_powers,
    evens,
    powers_of_two,
    stoehr_counterexample,
  };

  Family family = Family::naturals;
  // k for kth_powers, block depth for stoehr_counterexample.
  unsigned parameter = 0;

  // Accepts "naturals", "primes", "evens", "squares", "cubes",
  // "kth_powers(k)", "powers_of_two", "stoehr", "stoehr_counterexample(depth)".
  static SequenceKind parse(std::string_view text);
  std::string name() const;
};

// Membership follows the mathematical definition; 0 belongs to every
// kth_powers sequence, primes come from a sieve.
Sequence generate(const SequenceKind& kind, std::uint64_t horizon);

// Counterexample to O-regular variation of s(x; A): the cubes together with
// runs a_k .. a_k + b_k^2 where b_k = 2^(2^k) and a_k = b_k^3, for k = 1..depth.
struct CounterexampleSpec {
  unsigned depth = 4;

  static constexpr unsigned kMaxDepth = 6;
  // Blocks whose anchor does not fit in 64 bits can never be reached by a
  // 64-bit x, so only k <= 4 ever contributes.
  static constexpr unsigned kMaxReachableBlock = 4;

  static std::uint64_t block_base(unsigned k);    // 2^(2^k), k <= 5
  static std::uint64_t block_anchor(unsigned k);  // a_k, k <= 4
  static std::uint64_t block_length(unsigned k);  // b_k^2, k <= 4
};

// Closed-form s(x; A) for the counterexample set; x may be far beyond any
// materialised horizon.
std::uint64_t counterexample_count(const CounterexampleSpec& spec, std::uint64_t x);

// floor(x^(1/3))
std::uint64_t integer_cube_root(std::uint64_t x);

// min gcd(a, b) over distinct members a != b up to `cap`. This is the pairwise
// minimum, which can exceed the gcd of the whole set: {6, 10, 15} gives 2.
// Returns early on 1. InputError with fewer than two members.
std::uint64_t min_pairwise_gcd(const Sequence& a, std::uint64_t cap);

// Text format: header "# horizon=N label=...", then one strictly increasing
// decimal member per line.
void write_sequence(std::ostream& out, const Sequence& a);
Sequence read_sequence(std::istream& in);

}  // namespace addbasis
