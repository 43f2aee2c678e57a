#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "addbasis/rng.hpp"

namespace addbasis {

// Smallest-prime-factor sieve over [0, M] with pi(x) as a prefix table.
// omega(n) below is the number of distinct prime divisors.
class ArithTables {
 public:
  // Segmented sieve; runs the pi(10) = 4, pi(100) = 25 self-test when M >= 100.
  explicit ArithTables(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool is_prime(std::uint64_t n) const;
  std::uint64_t pi(std::uint64_t x) const;
  std::uint32_t smallest_factor(std::uint64_t n) const;  // n >= 2
  std::uint64_t phi(std::uint64_t n) const;
  unsigned omega(std::uint64_t n) const;
  // Distinct prime divisors in increasing order.
  std::vector<std::uint64_t> prime_divisors(std::uint64_t n) const;
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  void require(std::uint64_t n) const;

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> pi_;
  std::vector<std::uint32_t> primes_;
};

// g(n) = #{p <= n prime : 2n - p prime}. RangeError when 2n exceeds the sieve.
std::uint64_t g_exact(std::uint64_t n, const ArithTables& tables);

struct KPQ {
  std::int64_t K = 0;  // phi(2n)/2 - 1
  std::int64_t P = 0;  // pi(n) - omega(2n)
  std::int64_t Q = 0;  // pi(2n-2) - pi(n)
};

KPQ kpq(std::uint64_t n, const ArithTables& tables);

struct Prop43Scan {
  // n <= limit with pi(2n) - omega(2n) > phi(2n)/2
  std::vector<std::uint64_t> satisfying;
  std::uint64_t largest = 0;
  // g(n) > 0 held for every satisfying n.
  bool conclusion_holds = true;
  std::optional<std::uint64_t> counterexample;
};

Prop43Scan prop43_scan(std::uint64_t limit, const ArithTables& tables);

struct GoldbachVerification {
  std::uint64_t checked = 0;
  std::optional<std::uint64_t> first_failure;  // n with g(n) = 0
};

// g(n) > 0 for lo <= n <= hi, stopping at the first prime that works.
GoldbachVerification verify_goldbach(std::uint64_t lo, std::uint64_t hi,
                                     const ArithTables& tables, unsigned threads = 0);

struct HypergeomStats {
  double mean = 0;
  double variance = 0;
  std::int64_t support_lo = 0;
  std::int64_t support_hi = 0;
};

// Marked-draw count when Q items are drawn without replacement from K, of
// which P are marked. InputError unless K >= 2 and 0 <= P, Q <= K.
HypergeomStats hypergeom_stats(std::int64_t K, std::int64_t P, std::int64_t Q);
std::int64_t hypergeom_sample(std::int64_t K, std::int64_t P, std::int64_t Q, Rng& rng);
std::int64_t hypergeom_sample(std::int64_t K, std::int64_t P, std::int64_t Q, std::uint64_t seed);
double hypergeom_pmf(std::int64_t K, std::int64_t P, std::int64_t Q, std::int64_t k);

// 2 exp(-2 t^2 Q); InputError for t < 0.
double tail_bound(double t, std::int64_t Q);

// Partial product over odd primes p <= prime_limit of 1 - 1/(p-1)^2.
long double c2_constant(std::uint64_t prime_limit, const ArithTables& tables);

struct Predictions {
  double predA = 0;
  double predB = 0;
};

// At the even number N = 2n, with log taken of N:
//   predA = 2 c2 N / log^2 N * prod_{p | N, p >= 3} (p-1)/(p-2)
//   predB = N / phi(N) * N / log^2 N
Predictions predictions(std::uint64_t n, const ArithTables& tables, double c2);

struct GoldbachRecord {
  std::uint64_t n = 0;
  std::uint64_t g = 0;
  std::int64_t K = 0;
  std::int64_t P = 0;
  std::int64_t Q = 0;
  double mean_gt = 0;  // NaN when K < 2
  double var_gt = 0;   // NaN when K < 2
  std::uint64_t r2 = 0;  // 2 g(n) - [n prime] = r_2(2n; primes)
  double predA = 0;
  double predB = 0;
};

GoldbachRecord goldbach_record(std::uint64_t n, const ArithTables& tables, double c2);
std::vector<GoldbachRecord> goldbach_records(std::uint64_t lo, std::uint64_t hi,
                                             const ArithTables& tables, double c2,
                                             unsigned threads = 0);

// Header "n,g,K,P,Q,mean_gt,var_gt,r2,predA,predB".
void write_records_csv(std::ostream& out, std::span<const GoldbachRecord> records);

}  // namespace addbasis
