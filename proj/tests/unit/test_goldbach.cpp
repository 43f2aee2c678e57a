#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "addbasis/error.hpp"
#include "addbasis/goldbach.hpp"
#include "addbasis/repr.hpp"
#include "oracles.hpp"

using namespace addbasis;

namespace {

const ArithTables& tables() {
  static const ArithTables t(2000000);
  return t;
}

// Plain sieve of Eratosthenes, kept separate from the library's SPF sieve.
std::vector<bool> eratosthenes(std::uint64_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = prime[1] = false;
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (!prime[p]) continue;
    for (std::uint64_t q = p * p; q <= limit; q += p) prime[q] = false;
  }
  return prime;
}

}  // namespace

TEST(ArithTables, SmallValues) {
  const auto& t = tables();
  EXPECT_EQ(t.pi(10), 4u);
  EXPECT_EQ(t.pi(100), 25u);
  EXPECT_EQ(t.pi(1000000), 78498u);
  EXPECT_EQ(t.pi(2000000), 148933u);
  EXPECT_EQ(t.phi(30), 8u);
  EXPECT_EQ(t.omega(30), 3u);
  EXPECT_EQ(t.omega(1024), 1u);
  EXPECT_EQ(t.prime_divisors(360), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_THROW(ArithTables(1), InputError);
  EXPECT_THROW(t.pi(2000001), RangeError);
}

TEST(ArithTables, PrimesHaveTrivialInvariants) {
  const auto& t = tables();
  for (const std::uint32_t p : t.primes()) {
    ASSERT_EQ(t.phi(p), p - 1u);
    ASSERT_EQ(t.omega(p), 1u);
    ASSERT_EQ(t.smallest_factor(p), p);
  }
}

TEST(ArithTables, MatchesTrialDivision) {
  const auto& t = tables();
  const auto sieve = eratosthenes(200000);
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= 200000; ++n) {
    count += sieve[n];
    ASSERT_EQ(t.is_prime(n), sieve[n]) << n;
    ASSERT_EQ(t.pi(n), count) << n;
    std::uint64_t p = 2;
    while (n % p != 0) ++p;
    ASSERT_EQ(t.smallest_factor(n), p) << n;
  }
  for (std::uint64_t n = 1; n <= 2000; ++n) ASSERT_EQ(t.phi(n), oracle::totient(n)) << n;
}

TEST(Goldbach, ExactCountExamples) {
  const auto& t = tables();
  EXPECT_EQ(g_exact(4, t), 1u);
  EXPECT_EQ(g_exact(11, t), 3u);
  EXPECT_EQ(g_exact(15, t), 3u);
  const ArithTables small(100);
  EXPECT_THROW(g_exact(51, small), RangeError);
}

TEST(Goldbach, KpqExamples) {
  const auto& t = tables();
  const auto k11 = kpq(11, t);
  EXPECT_EQ(k11.K, 4);
  EXPECT_EQ(k11.P, 3);
  EXPECT_EQ(k11.Q, 3);
  const auto k15 = kpq(15, t);
  EXPECT_EQ(k15.K, 3);
  EXPECT_EQ(k15.P, 3);
  EXPECT_EQ(k15.Q, 3);
  EXPECT_EQ(kpq(4, t).K, 1);
}

// |A_n| = K, |A_n ∩ P| = P, |B_n ∩ P| = Q with A_n = {1 < k < n : gcd(k, 2n) = 1}
// and B_n = 2n - A_n.
TEST(Goldbach, SetsMatchFormulas) {
  const auto& t = tables();
  const auto prime = eratosthenes(20000);
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    std::int64_t K = 0, P = 0, Q = 0;
    for (std::uint64_t k = 2; k < n; ++k) {
      if (std::gcd(k, 2 * n) != 1) continue;
      ++K;
      P += prime[k];
      Q += prime[2 * n - k];
    }
    const auto formula = kpq(n, t);
    ASSERT_EQ(formula.K, K) << n;
    ASSERT_EQ(formula.P, P) << n;
    ASSERT_EQ(formula.Q, Q) << n;
  }
}

TEST(Goldbach, MirrorIsBijection) {
  for (std::uint64_t n = 2; n <= 1000; ++n) {
    std::vector<std::uint64_t> a, b;
    for (std::uint64_t k = 2; k < n; ++k) {
      if (std::gcd(k, 2 * n) == 1) a.push_back(k);
    }
    for (std::uint64_t k = n + 1; k < 2 * n - 1; ++k) {
      if (std::gcd(k, 2 * n) == 1) b.push_back(k);
    }
    ASSERT_EQ(a.size(), b.size()) << n;
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(2 * n - a[i], b[b.size() - 1 - i]) << n;
  }
}

TEST(Goldbach, CountMatchesPairTable) {
  const auto& t = tables();
  const auto primes = generate(SequenceKind::parse("primes"), 20000);
  const auto table = build_table(primes, 2, 20000);
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    const Count r2 = 2 * Count{g_exact(n, t)} - (t.is_prime(n) ? 1 : 0);
    ASSERT_EQ(table.r(2 * n), r2) << n;
    ASSERT_EQ(goldbach_record(n, t, 0.66).r2, static_cast<std::uint64_t>(r2));
  }
}

TEST(Prop43, Examples) {
  const auto& t = tables();
  const auto scan = prop43_scan(200000, t);
  EXPECT_TRUE(scan.conclusion_holds);
  EXPECT_FALSE(scan.counterexample.has_value());
  EXPECT_TRUE(std::ranges::binary_search(scan.satisfying, 15u));
  EXPECT_FALSE(std::ranges::binary_search(scan.satisfying, 2u));
  EXPECT_GE(2 * scan.largest, 30000u);
  EXPECT_LE(2 * scan.largest, 300000u);
  for (const auto n : scan.satisfying) {
    ASSERT_GT(t.pi(2 * n) - t.omega(2 * n), t.phi(2 * n) / 2) << n;
  }
}

TEST(Goldbach, VerifiedToOneHundredThousand) {
  const auto result = verify_goldbach(2, 100000, tables());
  EXPECT_EQ(result.checked, 99999u);
  EXPECT_FALSE(result.first_failure.has_value());
}

TEST(Hypergeom, StatsExamples) {
  const auto s = hypergeom_stats(4, 3, 3);
  EXPECT_DOUBLE_EQ(s.mean, 2.25);
  EXPECT_EQ(s.support_lo, 2);
  EXPECT_EQ(s.support_hi, 3);
  EXPECT_DOUBLE_EQ(s.variance, 3.0 * 3 * 1 * 1 / (16.0 * 3));

  const auto none = hypergeom_stats(10, 0, 4);
  EXPECT_EQ(none.mean, 0);
  EXPECT_EQ(none.support_lo, 0);
  EXPECT_EQ(none.support_hi, 0);

  const auto all = hypergeom_stats(10, 10, 4);
  EXPECT_EQ(all.mean, 4);
  EXPECT_EQ(all.support_lo, 4);
  EXPECT_EQ(all.support_hi, 4);

  EXPECT_THROW(hypergeom_stats(1, 1, 1), InputError);
  EXPECT_THROW(hypergeom_stats(10, 11, 1), InputError);
  EXPECT_THROW(hypergeom_stats(10, 1, -1), InputError);
}

TEST(Hypergeom, PmfMatchesBinomials) {
  for (std::int64_t k = 0; k <= 3; ++k) {
    const double expected = static_cast<double>(oracle::binomial(3, k) * oracle::binomial(3, 3 - k)) /
                            static_cast<double>(oracle::binomial(6, 3));
    EXPECT_NEAR(hypergeom_pmf(6, 3, 3, k), expected, 1e-12) << k;
  }
  double total = 0;
  for (std::int64_t k = 0; k <= 40; ++k) total += hypergeom_pmf(100, 40, 30, k);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(hypergeom_pmf(4, 3, 3, 1), 0.0);
}

TEST(HypergeomProperty, DrawsRespectSupportAndMoments) {
  struct Case {
    std::int64_t K, P, Q;
  };
  for (const Case c : {Case{4, 3, 3}, Case{50, 20, 30}, Case{1000, 100, 400}, Case{10, 10, 7}}) {
    const auto stats = hypergeom_stats(c.K, c.P, c.Q);
    Rng rng(derive_seed(5, static_cast<std::uint64_t>(c.K)));
    const int draws = 20000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < draws; ++i) {
      const auto g = hypergeom_sample(c.K, c.P, c.Q, rng);
      ASSERT_GE(g, stats.support_lo);
      ASSERT_LE(g, stats.support_hi);
      sum += static_cast<double>(g);
      sum_sq += static_cast<double>(g) * static_cast<double>(g);
    }
    const double mean = sum / draws;
    const double variance = (sum_sq - draws * mean * mean) / (draws - 1);
    const double se_mean = std::sqrt(stats.variance / draws);
    EXPECT_LE(std::abs(mean - stats.mean), 3 * se_mean + 1e-12) << c.K;
    // Variance of the sample variance ~ 2 sigma^4 / n for near-normal draws;
    // kept generous for the skewed small cases.
    EXPECT_LE(std::abs(variance - stats.variance), 6 * stats.variance * std::sqrt(2.0 / draws) + 1e-12)
        << c.K;
  }
}

TEST(HypergeomProperty, EmpiricalPmf) {
  const int draws = 60000;
  std::vector<int> counts(4, 0);
  Rng rng(123);
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(hypergeom_sample(6, 3, 3, rng))];
  for (std::int64_t k = 0; k <= 3; ++k) {
    const double p = hypergeom_pmf(6, 3, 3, k);
    const double sigma = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / double(draws), p, 4 * sigma) << k;
  }
}

TEST(Hypergeom, SeededDrawReproducible) {
  EXPECT_EQ(hypergeom_sample(1000, 300, 200, 77), hypergeom_sample(1000, 300, 200, 77));
  EXPECT_EQ(hypergeom_sample(10, 10, 7, 1), 7);
}

TEST(TailBound, Examples) {
  EXPECT_EQ(tail_bound(0, 100), 2.0);
  EXPECT_NEAR(tail_bound(0.1, 1000), 2 * std::exp(-20.0), 1e-20);
  EXPECT_THROW(tail_bound(-0.1, 10), InputError);

  // t = 1/(2 log^2 n) at the actual Q(n): the bound sits below 2 exp(-n / (8 log^5 n)).
  const std::uint64_t n = 10000;
  const double L = std::log(static_cast<double>(n));
  const double t = 1 / (2 * L * L);
  const auto Q = kpq(n, tables()).Q;
  EXPECT_LE(tail_bound(t, Q), 2 * std::exp(-static_cast<double>(n) / (8 * std::pow(L, 5))));
  EXPECT_LT(tail_bound(t, Q), 2.0);
}

TEST(C2, PartialProducts) {
  const auto& t = tables();
  EXPECT_NEAR(static_cast<double>(c2_constant(3, t)), 0.75, 1e-15);
  EXPECT_NEAR(static_cast<double>(c2_constant(5, t)), 45.0 / 64, 1e-15);
  long double previous = 1;
  for (std::uint64_t limit : {3u, 10u, 100u, 1000u, 10000u, 100000u, 1000000u}) {
    const long double c = c2_constant(limit, t);
    EXPECT_LT(c, previous);
    previous = c;
  }
  EXPECT_NEAR(static_cast<double>(previous), 0.66016, 1e-5);
  EXPECT_LT(std::abs(static_cast<double>(c2_constant(1000000, t) - c2_constant(100000, t))), 1e-6);
}

TEST(Predictions, PowersOfTwo) {
  const auto& t = tables();
  for (std::uint64_t n : {8u, 1024u, 65536u}) {
    const auto pred = predictions(n, t, 0.66);
    const double N = 2.0 * static_cast<double>(n), L = std::log(N);
    EXPECT_NEAR(pred.predA, 2 * 0.66 * N / (L * L), 1e-9 * pred.predA);
    EXPECT_NEAR(pred.predB, 2 * N / (L * L), 1e-9 * pred.predB);
  }
}

TEST(Predictions, RatioBracket) {
  const auto& t = tables();
  const double c2 = static_cast<double>(c2_constant(1000000, t));
  for (std::uint64_t n = 2; n <= 20000; ++n) {
    const auto pred = predictions(n, t, c2);
    const double ratio = pred.predB / pred.predA;
    ASSERT_GE(ratio, 1 - 1e-12) << n;
    ASSERT_LE(ratio, 1 / c2 + 1e-12) << n;
  }
}

TEST(Records, CsvAndMoments) {
  const auto& t = tables();
  const auto records = goldbach_records(2, 200, t, 0.66, 2);
  ASSERT_EQ(records.size(), 199u);
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].n, i + 2);
  EXPECT_TRUE(std::isnan(records[0].mean_gt));  // n = 2: K = 0
  const auto& r11 = records[9];
  EXPECT_EQ(r11.n, 11u);
  EXPECT_DOUBLE_EQ(r11.mean_gt, 2.25);
  std::ostringstream out;
  write_records_csv(out, records);
  EXPECT_EQ(out.str().rfind("n,g,K,P,Q,mean_gt,var_gt,r2,predA,predB\n", 0), 0u);
}
