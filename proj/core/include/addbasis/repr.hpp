#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "addbasis/count.hpp"
#include "addbasis/report.hpp"
#include "addbasis/sequences.hpp"

namespace addbasis {

enum class ReprMethod { direct, fast };

ReprMethod parse_method(const std::string& text);
std::string to_string(ReprMethod method);

struct BuildOptions {
  ReprMethod method = ReprMethod::fast;
  // Upper limit on CRT primes the fast path may use (1..3).
  unsigned max_primes = 3;
  unsigned threads = 0;
};

// r_d(0..N; A) with prefix sums s_d, exact.
class ReprTable {
 public:
  ReprTable(unsigned d, std::vector<Count> counts, std::string label, ReprMethod method,
            std::vector<std::uint64_t> primes);

  unsigned order() const { return d_; }
  std::uint64_t horizon() const { return counts_.size() - 1; }
  const std::string& label() const { return label_; }
  ReprMethod method() const { return method_; }
  // Moduli used by the fast path; empty for direct.
  const std::vector<std::uint64_t>& primes() const { return primes_; }

  // RangeError outside [0, N].
  Count r(std::uint64_t n) const;
  Count s(std::uint64_t x) const;
  // s_d(floor x)
  Count s_real(double x) const;
  // s_d(n)/n, n >= 1 (undefined at 0).
  double mean_value(std::uint64_t n) const;

  std::span<const Count> counts() const { return counts_; }
  std::span<const Count> prefix() const { return prefix_; }

 private:
  unsigned d_;
  std::vector<Count> counts_;
  std::vector<Count> prefix_;
  std::string label_;
  ReprMethod method_;
  std::vector<std::uint64_t> primes_;
};

// Ordered d-tuples of members summing to n, by straightforward recursion over
// the members. Cost grows like |A ∩ [0, n]|^(d-1).
Count r_direct(const Sequence& a, unsigned d, std::uint64_t n);

// CapacityError when s_d(N) could leave 128 bits or the fast path would need
// more than max_primes primes.
ReprTable build_table(const Sequence& a, unsigned d, std::uint64_t horizon,
                      const BuildOptions& options = {});

// Exact check of
//   r_d(n)  = sum_k r_{d-l}(k) r_l(n-k)
//   s_d(n)  = sum_k r_{d-l}(k) s_l(n-k)
//   s_d(n)  = sum_k s_{d-l}(k) r_l(n-k)
// at the sample points. Columns hold the absolute discrepancy of each identity.
VerificationReport recursion_check(const Sequence& a, unsigned d, unsigned l,
                                   std::span<const std::uint64_t> sample_ns,
                                   const BuildOptions& options = {});

struct DistinctBounds {
  Count ordered = 0;   // r_d(n)
  Count multisets = 0; // r_d^*(n): unordered, repetition allowed
  bool sandwich_holds = false;  // r_d/d! <= r_d^* <= r_d
};

// ResourceError when n * |A ∩ [0,n]|^(d-1) exceeds `budget`.
DistinctBounds distinct_representation_bounds(const Sequence& a, unsigned d, std::uint64_t n,
                                              double budget = 1e8);

// "# label=... d=... method=... primes=p1;p2" then "n,r_d,s_d" rows.
void write_table_csv(std::ostream& out, const ReprTable& table);

}  // namespace addbasis
