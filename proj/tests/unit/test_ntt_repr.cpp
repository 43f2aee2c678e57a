#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "addbasis/error.hpp"
#include "addbasis/ntt.hpp"
#include "addbasis/repr.hpp"
#include "addbasis/rng.hpp"
#include "oracles.hpp"

using namespace addbasis;

namespace {

Sequence named(const char* text, std::uint64_t horizon) {
  return generate(SequenceKind::parse(text), horizon);
}

Sequence random_sequence(std::uint64_t seed, std::uint64_t horizon, double density) {
  return Sequence::from_elements(oracle::random_members(seed, horizon, density), horizon);
}

BuildOptions with(ReprMethod method, unsigned max_primes = 3) {
  BuildOptions o;
  o.method = method;
  o.max_primes = max_primes;
  return o;
}

}  // namespace

TEST(Ntt, MultiplyMatchesSchoolbook) {
  Rng rng(5);
  for (const auto& prime : kNttPrimes) {
    std::vector<std::uint64_t> a(37), b(53);
    for (auto& v : a) v = rng.below(prime.modulus);
    for (auto& v : b) v = rng.below(prime.modulus);
    const auto product = multiply_mod(a, b, 89, prime);
    ASSERT_EQ(product.size(), 89u);
    for (std::size_t n = 0; n < 89; ++n) {
      Count expected = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (n >= i && n - i < b.size()) {
          expected = (expected + static_cast<Count>(a[i]) * b[n - i]) % prime.modulus;
        }
      }
      ASSERT_EQ(product[n], static_cast<std::uint64_t>(expected)) << n;
    }
  }
}

TEST(Ntt, PowerMatchesSchoolbook) {
  const auto members = oracle::random_members(9, 120, 0.3);
  std::vector<std::uint8_t> indicator(121, 0);
  for (auto m : members) indicator[m] = 1;
  const auto reference = oracle::convolution_powers(indicator, 4);
  const auto residues = power_mod(indicator, 4, 121, kNttPrimes[0]);
  for (std::size_t n = 0; n <= 120; ++n) {
    ASSERT_EQ(residues[n], static_cast<std::uint64_t>(reference[n] % kNttPrimes[0].modulus));
  }
}

TEST(Ntt, CrtRecoversWideValues) {
  Rng rng(17);
  std::vector<Count> values(64);
  for (auto& v : values) v = (static_cast<Count>(rng.next()) << 64 | rng.next()) >> 2;
  values[0] = 0;
  values[1] = kCountMax >> 1;
  std::vector<std::vector<std::uint64_t>> residues(3);
  for (std::size_t p = 0; p < 3; ++p) {
    for (auto v : values) residues[p].push_back(static_cast<std::uint64_t>(v % kNttPrimes[p].modulus));
  }
  EXPECT_EQ(crt_combine(residues), values);

  // One and two primes suffice for values below their products.
  std::vector<std::vector<std::uint64_t>> single{{12345, 0, kNttPrimes[0].modulus - 1}};
  const auto one = crt_combine(single);
  EXPECT_EQ(one[0], Count{12345});
  EXPECT_EQ(one[2], Count{kNttPrimes[0].modulus - 1});
}

TEST(Repr, DirectExamples) {
  EXPECT_EQ(r_direct(named("naturals", 10), 2, 4), Count{5});
  EXPECT_EQ(r_direct(named("primes", 20), 2, 10), Count{3});
  const auto primes = named("primes", 50);
  for (std::uint64_t n = 0; n <= 50; ++n) {
    EXPECT_EQ(r_direct(primes, 1, n), Count{primes.contains(n) ? 1u : 0u});
  }
  EXPECT_THROW(r_direct(primes, 2, 51), RangeError);
}

TEST(Repr, DirectMatchesTupleEnumeration) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto members = oracle::random_members(seed, 60, 0.25);
    const auto a = Sequence::from_elements(members, 60);
    for (unsigned d = 1; d <= 4; ++d) {
      for (std::uint64_t n = 0; n <= 60; n += 3) {
        ASSERT_EQ(r_direct(a, d, n), oracle::tuples_summing_to(members, d, n))
            << "seed " << seed << " d " << d << " n " << n;
      }
    }
  }
}

TEST(Repr, BinomialLaw) {
  const auto naturals = named("naturals", 100);
  for (const auto method : {ReprMethod::direct, ReprMethod::fast}) {
    for (unsigned d = 1; d <= 5; ++d) {
      const auto table = build_table(naturals, d, 100, with(method));
      for (std::uint64_t n = 0; n <= 100; ++n) {
        ASSERT_EQ(table.r(n), oracle::binomial(n + d - 1, d - 1))
            << to_string(method) << " d=" << d << " n=" << n;
      }
    }
  }
}

TEST(Repr, OrderOneIsIndicator) {
  const auto primes = named("primes", 1000);
  for (const auto method : {ReprMethod::direct, ReprMethod::fast}) {
    const auto table = build_table(primes, 1, 1000, with(method));
    for (std::uint64_t n = 0; n <= 1000; ++n) ASSERT_EQ(table.r(n), Count{primes.contains(n)});
  }
}

// Property: fast and direct agree exactly on random sequences.
TEST(ReprProperty, FastMatchesDirect) {
  for (std::uint64_t trial = 0; trial < 12; ++trial) {
    const double density = 0.05 + 0.05 * static_cast<double>(trial % 6);
    const auto a = random_sequence(derive_seed(42, trial), 512, density);
    const unsigned d = 2 + trial % 3;
    const auto fast = build_table(a, d, 512, with(ReprMethod::fast));
    const auto direct = build_table(a, d, 512, with(ReprMethod::direct));
    ASSERT_TRUE(std::equal(fast.counts().begin(), fast.counts().end(), direct.counts().begin()))
        << "trial " << trial;
    EXPECT_TRUE(direct.primes().empty());
    EXPECT_FALSE(fast.primes().empty());
  }
}

TEST(ReprProperty, FastMatchesSchoolbookConvolution) {
  const auto members = oracle::random_members(77, 400, 0.4);
  std::vector<std::uint8_t> indicator(401, 0);
  for (auto m : members) indicator[m] = 1;
  const auto a = Sequence::from_elements(members, 400);
  for (unsigned d = 2; d <= 5; ++d) {
    const auto reference = oracle::convolution_powers(indicator, d);
    const auto table = build_table(a, d, 400);
    for (std::uint64_t n = 0; n <= 400; ++n) ASSERT_EQ(table.r(n), reference[n]) << d << " " << n;
  }
}

TEST(ReprProperty, PrefixConsistency) {
  const auto table = build_table(named("primes", 5000), 3, 5000);
  EXPECT_EQ(table.s(0), table.r(0));
  for (std::uint64_t n = 1; n <= 5000; ++n) ASSERT_EQ(table.s(n) - table.s(n - 1), table.r(n));
  EXPECT_EQ(table.s_real(100.7), table.s(100));
  EXPECT_DOUBLE_EQ(table.mean_value(50), to_double(table.s(50)) / 50);
  EXPECT_THROW(table.mean_value(0), DomainError);
  EXPECT_THROW(table.r(5001), RangeError);
}

// Property: the table equals its convolution transpose, sum_k 1_A(n-k) 1_A(k).
TEST(ReprProperty, PairCountSymmetry) {
  const auto a = random_sequence(8, 2000, 0.2);
  const auto table = build_table(a, 2, 2000);
  for (std::uint64_t n = 0; n <= 2000; ++n) {
    Count transposed = 0;
    for (std::uint64_t k = n + 1; k-- > 0;) transposed += a.contains(n - k) && a.contains(k);
    ASSERT_EQ(table.r(n), transposed) << n;
  }
}

TEST(Repr, MinimalPrimeSetAndThirdPrime) {
  // 8 members with d = 42: 8^41 needs all three primes, 8^42 still fits.
  const auto wide = Sequence::from_elements(std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7}, 294);
  const auto f42 = build_table(wide, 42, 294, with(ReprMethod::fast));
  const auto d42 = build_table(wide, 42, 294, with(ReprMethod::direct));
  EXPECT_EQ(f42.primes().size(), 3u);
  EXPECT_TRUE(std::equal(f42.counts().begin(), f42.counts().end(), d42.counts().begin()));
  EXPECT_GT(bit_width(f42.r(147)), 100u);

  const auto one = build_table(named("naturals", 100), 3, 100, with(ReprMethod::fast));
  EXPECT_EQ(one.primes().size(), 1u);
}

TEST(Repr, CapacityErrors) {
  // 1e5+1 members, d = 5: m^4 > p1, so one prime is not enough.
  const auto naturals = named("naturals", 100000);
  EXPECT_THROW(build_table(naturals, 5, 100000, with(ReprMethod::fast, 1)), CapacityError);
  // m^d beyond 128 bits.
  EXPECT_THROW(build_table(naturals, 8, 100000), CapacityError);
}

TEST(Repr, RecursionIdentities) {
  std::vector<std::uint64_t> upto500(501), upto200(201), upto300(301);
  for (std::uint64_t n = 0; n <= 500; ++n) upto500[n] = n;
  for (std::uint64_t n = 0; n <= 200; ++n) upto200[n] = n;
  for (std::uint64_t n = 0; n <= 300; ++n) upto300[n] = n;

  for (const auto& report : {recursion_check(named("primes", 500), 3, 1, upto500),
                             recursion_check(named("naturals", 200), 4, 2, upto200),
                             recursion_check(random_sequence(3, 300, 0.3), 2, 1, upto300)}) {
    EXPECT_TRUE(report.passed) << report.subject;
    for (const char* name : {"discrepancy_r", "discrepancy_s_rl", "discrepancy_s_sl"}) {
      const auto* column = report.column(name);
      ASSERT_NE(column, nullptr) << name;
      for (double v : *column) ASSERT_EQ(v, 0.0);
    }
  }
}

TEST(Repr, DistinctRepresentations) {
  const auto p = distinct_representation_bounds(named("primes", 20), 2, 10);
  EXPECT_EQ(p.ordered, Count{3});
  EXPECT_EQ(p.multisets, Count{2});
  EXPECT_TRUE(p.sandwich_holds);

  const auto n = distinct_representation_bounds(named("naturals", 20), 2, 4);
  EXPECT_EQ(n.ordered, Count{5});
  EXPECT_EQ(n.multisets, Count{3});

  // Multisets of three naturals summing to 60: a <= b <= c counted directly.
  const auto big = distinct_representation_bounds(named("naturals", 60), 3, 60);
  Count triples = 0;
  for (int a = 0; a <= 60; ++a) {
    for (int b = a; a + b <= 60; ++b) triples += (60 - a - b >= b);
  }
  EXPECT_EQ(big.ordered, oracle::binomial(62, 2));
  EXPECT_EQ(big.multisets, triples);
  EXPECT_TRUE(big.sandwich_holds);

  EXPECT_THROW(distinct_representation_bounds(named("naturals", 10000), 4, 10000, 1e6), ResourceError);
}

TEST(Repr, CsvDump) {
  const auto table = build_table(named("primes", 20), 2, 20);
  std::ostringstream out;
  write_table_csv(out, table);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# label=primes d=2 method=fast primes=", 0), 0u) << text;
  EXPECT_NE(text.find("\nn,r_d,s_d\n"), std::string::npos);
  EXPECT_NE(text.find("\n10,3,"), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}
