#include "addbasis/goldbach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "addbasis/error.hpp"
#include "addbasis/parallel.hpp"
#include "addbasis/report.hpp"

namespace addbasis {

namespace {

constexpr std::uint64_t kSegment = 1 << 16;
constexpr std::uint64_t kMaxLimit = std::numeric_limits<std::uint32_t>::max() - 1;

}  // namespace

ArithTables::ArithTables(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw InputError("sieve limit must be at least 2");
  if (limit > kMaxLimit) throw InputError("sieve limit above 2^32 - 2");

  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;

  std::vector<std::uint32_t> base;
  {
    std::vector<std::uint8_t> composite(root + 1, 0);
    for (std::uint64_t p = 2; p <= root; ++p) {
      if (composite[p]) continue;
      base.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t m = p * p; m <= root; m += p) composite[m] = 1;
    }
  }

  spf_.assign(limit + 1, 0);
  for (std::uint64_t lo = 0; lo <= limit; lo += kSegment) {
    const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
    // Base primes in increasing order, so the first mark is the smallest factor.
    for (const std::uint32_t p : base) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t m = std::max(pp, (lo + p - 1) / p * p);
      for (; m <= hi; m += p) {
        if (spf_[m] == 0) spf_[m] = p;
      }
    }
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n) {
      if (spf_[n] == 0) {
        spf_[n] = static_cast<std::uint32_t>(n);
        primes_.push_back(static_cast<std::uint32_t>(n));
      }
    }
  }

  pi_.assign(limit + 1, 0);
  std::uint32_t count = 0;
  for (std::uint64_t n = 0; n <= limit; ++n) {
    if (n >= 2 && spf_[n] == n) ++count;
    pi_[n] = count;
  }

  if (limit >= 100 && (pi_[10] != 4 || pi_[100] != 25)) {
    throw std::logic_error("sieve self-test failed: pi(10) or pi(100) wrong");
  }
}

void ArithTables::require(std::uint64_t n) const {
  if (n > limit_) {
    throw RangeError(std::to_string(n) + " exceeds the sieve limit " + std::to_string(limit_));
  }
}

bool ArithTables::is_prime(std::uint64_t n) const {
  require(n);
  return n >= 2 && spf_[n] == n;
}

std::uint64_t ArithTables::pi(std::uint64_t x) const {
  require(x);
  return pi_[x];
}

std::uint32_t ArithTables::smallest_factor(std::uint64_t n) const {
  require(n);
  if (n < 2) throw InputError("smallest prime factor needs n >= 2");
  return spf_[n];
}

std::vector<std::uint64_t> ArithTables::prime_divisors(std::uint64_t n) const {
  require(n);
  std::vector<std::uint64_t> out;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  return out;
}

std::uint64_t ArithTables::phi(std::uint64_t n) const {
  if (n == 0) throw InputError("phi(0) is undefined");
  std::uint64_t result = n;
  for (const auto p : prime_divisors(n)) result = result / p * (p - 1);
  return result;
}

unsigned ArithTables::omega(std::uint64_t n) const {
  return static_cast<unsigned>(prime_divisors(n).size());
}

std::uint64_t g_exact(std::uint64_t n, const ArithTables& tables) {
  if (2 * n > tables.limit()) {
    throw RangeError("g(" + std::to_string(n) + ") needs a sieve up to " + std::to_string(2 * n));
  }
  std::uint64_t count = 0;
  for (const std::uint32_t p : tables.primes()) {
    if (p > n) break;
    if (tables.is_prime(2 * n - p)) ++count;
  }
  return count;
}

KPQ kpq(std::uint64_t n, const ArithTables& tables) {
  if (n < 2) throw InputError("K, P, Q need n >= 2");
  if (2 * n > tables.limit()) throw RangeError("K, P, Q need a sieve up to 2n");
  KPQ out;
  out.K = static_cast<std::int64_t>(tables.phi(2 * n) / 2) - 1;
  out.P = static_cast<std::int64_t>(tables.pi(n)) - tables.omega(2 * n);
  out.Q = static_cast<std::int64_t>(tables.pi(2 * n - 2)) - static_cast<std::int64_t>(tables.pi(n));
  return out;
}

Prop43Scan prop43_scan(std::uint64_t limit, const ArithTables& tables) {
  if (2 * limit > tables.limit()) throw RangeError("scan limit needs a sieve up to 2 * limit");
  Prop43Scan scan;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t N = 2 * n;
    const auto lhs = static_cast<std::int64_t>(tables.pi(N)) - tables.omega(N);
    // pi - omega > phi/2 without halving
    if (2 * lhs <= static_cast<std::int64_t>(tables.phi(N))) continue;
    scan.satisfying.push_back(n);
    scan.largest = n;
    if (scan.conclusion_holds && g_exact(n, tables) == 0) {
      scan.conclusion_holds = false;
      scan.counterexample = n;
    }
  }
  return scan;
}

GoldbachVerification verify_goldbach(std::uint64_t lo, std::uint64_t hi,
                                     const ArithTables& tables, unsigned threads) {
  lo = std::max<std::uint64_t>(lo, 2);
  GoldbachVerification out;
  if (hi < lo) return out;
  if (2 * hi > tables.limit()) throw RangeError("verification range needs a sieve up to 2 * hi");
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t chunks = (hi - lo) / kChunk + 1;
  std::vector<std::uint64_t> failure(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t a = lo + c * kChunk;
    const std::uint64_t b = std::min(hi, a + kChunk - 1);
    for (std::uint64_t n = a; n <= b; ++n) {
      bool found = false;
      for (const std::uint32_t p : tables.primes()) {
        if (p > n) break;
        if (tables.is_prime(2 * n - p)) {
          found = true;
          break;
        }
      }
      if (!found) {
        failure[c] = n;
        return;
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    if (failure[c]) {
      out.first_failure = failure[c];
      out.checked = failure[c] - lo + 1;
      return out;
    }
  }
  out.checked = hi - lo + 1;
  return out;
}

namespace {

void check_hypergeom(std::int64_t K, std::int64_t P, std::int64_t Q) {
  if (K < 2) throw InputError("hypergeometric variance needs K >= 2");
  if (P < 0 || P > K || Q < 0 || Q > K) throw InputError("hypergeometric needs 0 <= P, Q <= K");
}

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

HypergeomStats hypergeom_stats(std::int64_t K, std::int64_t P, std::int64_t Q) {
  check_hypergeom(K, P, Q);
  const double k = static_cast<double>(K);
  const double p = static_cast<double>(P);
  const double q = static_cast<double>(Q);
  HypergeomStats s;
  s.mean = p * q / k;
  s.variance = p * q * (k - p) * (k - q) / (k * k * (k - 1));
  s.support_lo = std::max<std::int64_t>(0, P + Q - K);
  s.support_hi = std::min(P, Q);
  return s;
}

std::int64_t hypergeom_sample(std::int64_t K, std::int64_t P, std::int64_t Q, Rng& rng) {
  check_hypergeom(K, P, Q);
  std::int64_t remaining = K;
  std::int64_t marked = P;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < Q; ++i) {
    if (static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(remaining))) < marked) {
      ++hits;
      --marked;
    }
    --remaining;
  }
  return hits;
}

std::int64_t hypergeom_sample(std::int64_t K, std::int64_t P, std::int64_t Q, std::uint64_t seed) {
  Rng rng(seed);
  return hypergeom_sample(K, P, Q, rng);
}

double hypergeom_pmf(std::int64_t K, std::int64_t P, std::int64_t Q, std::int64_t k) {
  const auto s = hypergeom_stats(K, P, Q);
  if (k < s.support_lo || k > s.support_hi) return 0.0;
  return std::exp(log_choose(P, k) + log_choose(K - P, Q - k) - log_choose(K, Q));
}

double tail_bound(double t, std::int64_t Q) {
  if (!(t >= 0)) throw InputError("tail bound needs t >= 0");
  if (Q < 0) throw InputError("tail bound needs Q >= 0");
  return 2 * std::exp(-2 * t * t * static_cast<double>(Q));
}

long double c2_constant(std::uint64_t prime_limit, const ArithTables& tables) {
  if (prime_limit > tables.limit()) throw RangeError("prime limit beyond the sieve");
  long double product = 1;
  for (const std::uint32_t p : tables.primes()) {
    if (p > prime_limit) break;
    if (p == 2) continue;
    const long double q = p - 1;
    product *= 1 - 1 / (q * q);
  }
  return product;
}

Predictions predictions(std::uint64_t n, const ArithTables& tables, double c2) {
  if (n < 2) throw InputError("predictions need n >= 2");
  const std::uint64_t N = 2 * n;
  const double x = static_cast<double>(N);
  const double log_sq = std::log(x) * std::log(x);
  double local = 1;
  for (const auto p : tables.prime_divisors(N)) {
    if (p >= 3) local *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
  }
  Predictions out;
  out.predA = 2 * c2 * x / log_sq * local;
  out.predB = x / static_cast<double>(tables.phi(N)) * x / log_sq;
  return out;
}

GoldbachRecord goldbach_record(std::uint64_t n, const ArithTables& tables, double c2) {
  GoldbachRecord rec;
  rec.n = n;
  rec.g = g_exact(n, tables);
  const auto k = kpq(n, tables);
  rec.K = k.K;
  rec.P = k.P;
  rec.Q = k.Q;
  if (k.K >= 2) {
    const auto s = hypergeom_stats(k.K, k.P, k.Q);
    rec.mean_gt = s.mean;
    rec.var_gt = s.variance;
  } else {
    rec.mean_gt = std::numeric_limits<double>::quiet_NaN();
    rec.var_gt = std::numeric_limits<double>::quiet_NaN();
  }
  rec.r2 = 2 * rec.g - (tables.is_prime(n) ? 1 : 0);
  const auto pred = predictions(n, tables, c2);
  rec.predA = pred.predA;
  rec.predB = pred.predB;
  return rec;
}

std::vector<GoldbachRecord> goldbach_records(std::uint64_t lo, std::uint64_t hi,
                                             const ArithTables& tables, double c2,
                                             unsigned threads) {
  if (lo < 2 || hi < lo) throw InputError("record range needs 2 <= lo <= hi");
  std::vector<GoldbachRecord> out(hi - lo + 1);
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = goldbach_record(lo + i, tables, c2); });
  return out;
}

void write_records_csv(std::ostream& out, std::span<const GoldbachRecord> records) {
  out << "n,g,K,P,Q,mean_gt,var_gt,r2,predA,predB\n";
  for (const auto& r : records) {
    out << r.n << ',' << r.g << ',' << r.K << ',' << r.P << ',' << r.Q << ','
        << format_double(r.mean_gt) << ',' << format_double(r.var_gt) << ',' << r.r2 << ','
        << format_double(r.predA) << ',' << format_double(r.predB) << '\n';
  }
}

}  // namespace addbasis
