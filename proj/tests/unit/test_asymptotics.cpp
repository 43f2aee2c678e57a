#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "addbasis/asymptotics.hpp"
#include "addbasis/error.hpp"
#include "oracles.hpp"

using namespace addbasis;

namespace {

Sequence named(const char* text, std::uint64_t horizon) {
  return generate(SequenceKind::parse(text), horizon);
}

double last(const VerificationReport& report, const char* column) {
  return report.column(column)->back();
}

}  // namespace

TEST(LogGrid, EndpointsAndOrder) {
  const auto xs = log_grid(10, 1000000, 10);
  EXPECT_EQ(xs.front(), 10u);
  EXPECT_EQ(xs.back(), 1000000u);
  EXPECT_EQ(xs.size(), 51u);
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LT(xs[i - 1], xs[i]);
  const auto dense = log_grid(1, 20, 40);
  EXPECT_EQ(dense.size(), 20u);  // duplicates removed
}

TEST(Sandwich, NaturalsExample) {
  const std::vector<std::uint64_t> xs{10};
  const auto report = sandwich_check(named("naturals", 10), 2, xs);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.column("lower")->at(0), 36);
  EXPECT_EQ(report.column("s_d")->at(0), 66);
  EXPECT_EQ(report.column("upper")->at(0), 121);
}

TEST(Sandwich, PairsHoldEverywhere) {
  std::vector<std::uint64_t> xs(10000);
  for (std::uint64_t i = 0; i < xs.size(); ++i) xs[i] = i + 1;
  for (const char* seq : {"primes", "squares", "cubes", "evens", "naturals"}) {
    const auto report = sandwich_check(named(seq, 10000), 2, xs);
    EXPECT_TRUE(report.passed) << seq;
  }
}

// The lower bound s(x/2)^d fails for d >= 3 (primes at x = 10: 27 > 17); the
// s(x/d)^d form holds.
TEST(Sandwich, OrderThreeLowerBound) {
  const std::vector<std::uint64_t> xs{10};
  const auto report = sandwich_check(named("primes", 100), 3, xs);
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.column("lower")->at(0), 27);
  EXPECT_EQ(report.column("s_d")->at(0), 17);
  EXPECT_LE(report.column("lower_x_over_d")->at(0), 17);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_EQ(*report.witness, 10);
}

TEST(Sandwich, CorrectedLowerBoundHolds) {
  const auto xs = log_grid(1, 10000, 20);
  for (const char* seq : {"primes", "squares", "cubes", "evens", "naturals"}) {
    for (unsigned d = 2; d <= 4; ++d) {
      const auto report = sandwich_check(named(seq, 10000), d, xs);
      const auto& lower = *report.column("lower_x_over_d");
      const auto& mid = *report.column("s_d");
      const auto& upper = *report.column("upper");
      for (std::size_t i = 0; i < xs.size(); ++i) {
        ASSERT_LE(lower[i], mid[i]) << seq << " d=" << d << " x=" << xs[i];
        ASSERT_LE(mid[i], upper[i]) << seq << " d=" << d << " x=" << xs[i];
      }
    }
  }
}

TEST(Ordering, Examples) {
  const auto xs = log_grid(10, 100000, 10);
  EXPECT_TRUE(ordering_check(named("primes", 100000), 2, xs).passed);
  EXPECT_TRUE(ordering_check(named("naturals", 100000), 3, xs).passed);
  EXPECT_TRUE(ordering_check(named("stoehr_counterexample(4)", 100000), 2, xs).passed);

  const auto naturals = ordering_check(named("naturals", 1000), 3, log_grid(10, 1000, 10));
  // s_3 / s_2 = (x + 3) / 3 on the naturals.
  EXPECT_NEAR(last(naturals, "ratio"), 1003.0 / 3, 1e-9);
}

TEST(Ordering, ShortGridRejected) {
  const auto xs = log_grid(100, 500, 10);
  EXPECT_THROW(ordering_check(named("primes", 1000), 2, xs), InputError);
}

TEST(Shift, Examples) {
  const auto xs = log_grid(1000, 1000000, 5);
  const auto primes = shift_stability(named("primes", 1000000), 2, 0.5, xs);
  EXPECT_TRUE(primes.passed);
  EXPECT_NEAR(last(primes, "ratio"), 1.0, 0.05);

  const auto naturals = shift_stability(named("naturals", 1000000), 2, 0.5, xs);
  EXPECT_TRUE(naturals.passed);
  const double x = 1e6, L = std::pow(x + 1, 0.5);
  const double floor_shift = std::floor(x - L);
  EXPECT_NEAR(last(naturals, "ratio"), (floor_shift + 1) * (floor_shift + 2) / ((x + 1) * (x + 2)), 1e-12);

  EXPECT_TRUE(shift_stability(named("squares", 1000000), 2, 0.3, xs).passed);
}

TEST(Integral, Examples) {
  const auto xs = log_grid(1000, 1000000, 5);
  const auto squares = integral_formula_check(named("squares", 1000000), GrowthFn::parse("x^(1/2)"),
                                              GrowthFn::parse("1"), 2, xs);
  EXPECT_TRUE(squares.passed) << squares.note;

  const auto naturals = integral_formula_check(named("naturals", 1000000), GrowthFn::parse("x"),
                                               GrowthFn::parse("1"), 2, xs);
  EXPECT_TRUE(naturals.passed) << naturals.note;

  const auto primes = integral_formula_check(named("primes", 1000000), GrowthFn::parse("x/log(x)"),
                                             GrowthFn::parse("x*log(x)^-2"), 2, xs);
  EXPECT_TRUE(primes.passed) << primes.note;
}

TEST(Integral, NaturalsClosedForm) {
  // With f = x and alpha close to 1 the integral is close to (x-1)^2/2 + O(x).
  const std::vector<std::uint64_t> xs{1000, 10000};
  const auto report = integral_formula_check(named("naturals", 10000), GrowthFn::parse("x"),
                                             GrowthFn::parse("1"), 2, xs);
  const auto& integral = *report.column("integral");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = static_cast<double>(xs[i]);
    EXPECT_NEAR(integral[i] / (x * x / 2), 1.0, 4.0 / x);
  }
}

TEST(Integral, PreconditionRefusals) {
  const auto xs = log_grid(1000, 100000, 5);
  // s(x; primes) is nowhere near sqrt(x) + O(1).
  EXPECT_THROW(integral_formula_check(named("primes", 100000), GrowthFn::parse("x^(1/2)"),
                                      GrowthFn::parse("1"), 2, xs),
               PreconditionError);
  // x^2 has unbounded derivative: not type-1.
  EXPECT_THROW(integral_formula_check(named("naturals", 100000), GrowthFn::parse("x^2"),
                                      GrowthFn::parse("1"), 2, xs),
               PreconditionError);
}

TEST(Constants, BetaIntegral) {
  const std::vector<double> xs{1e6};
  const auto est = constant_estimate(GrowthFn::parse("x^(1/2)"), 2, xs);
  EXPECT_NEAR(est[0].ratio / (std::numbers::pi / 4), 1.0, 0.02);
}

TEST(Constants, FirstOrderClosedForm) {
  const std::vector<double> xs{1e3, 1e6, 1e9};
  for (const char* text : {"x", "x^(1/2)", "x/log(x)", "x^(1/2)*log(x)^(1/2)", "x^(1/3)"}) {
    const auto f = GrowthFn::parse(text);
    const double alpha = f.threshold();
    const auto est = constant_estimate(f, 1, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double expected = (f(xs[i] - alpha) - f(alpha)) / f(xs[i]);
      EXPECT_NEAR(est[i].ratio, expected, 1e-8) << text << " x=" << xs[i];
    }
  }
}

TEST(Constants, PrimeLikeBandDecreasing) {
  const std::vector<double> xs{1e4, 1e5, 1e6, 1e8};
  const auto est = constant_estimate(GrowthFn::parse("x/log(x)"), 2, xs);
  EXPECT_GE(est[2].ratio, 0.5);
  EXPECT_LE(est[2].ratio, 0.8);
  for (std::size_t i = 1; i < est.size(); ++i) EXPECT_LT(est[i].ratio, est[i - 1].ratio);
}

TEST(Constants, DensityFormForPowers) {
  // f = x^(1/2), m = 2: (1/4) B(1/2, 1/2) / (1/2) = pi/2.
  const std::vector<double> xs{1e8};
  const auto est = constant_estimate(GrowthFn::parse("x^(1/2)"), 2, xs);
  EXPECT_NEAR(est[0].density_ratio / (std::numbers::pi / 2), 1.0, 0.02);
}

TEST(Exponent, Examples) {
  const auto xs = log_grid(10, 1000000, 10);
  // The local slope of pi(x) is 1 - 1/(log x - 1); the top half of 1e3..1e6 clears 0.9.
  EXPECT_GT(exponent_estimate(named("primes", 1000000), log_grid(1000, 1000000, 10)), 0.9);
  EXPECT_NEAR(exponent_estimate(named("squares", 1000000), xs), 0.5, 0.02);
  EXPECT_NEAR(exponent_estimate(named("cubes", 1000000), xs), 1.0 / 3, 0.02);
  EXPECT_THROW(exponent_estimate(named("primes", 1000), log_grid(10, 1000, 10)), InputError);
}

TEST(SecondMoment, Examples) {
  const auto naturals = second_moment_ratio(named("naturals", 100000), 2, log_grid(100, 100000, 5));
  EXPECT_TRUE(naturals.passed);
  EXPECT_NEAR(last(naturals, "rho") / (4.0 / 3), 1.0, 0.01);

  EXPECT_TRUE(second_moment_ratio(named("primes", 1000000), 2, log_grid(1000, 1000000, 5)).passed);
  EXPECT_FALSE(second_moment_ratio(named("powers_of_two", 1000000), 2, log_grid(1000, 1000000, 5)).passed);
}

// Cross-module: the prefix s_d used by the checks equals the recursion
// through r_direct summed by hand.
TEST(CrossModule, RecursionAndConvolutionAgree) {
  const auto a = named("primes", 600);
  const auto table = build_table(a, 3, 600);
  Count running = 0;
  for (std::uint64_t n = 0; n <= 600; ++n) {
    running += r_direct(a, 3, n);
    ASSERT_EQ(table.s(n), running) << n;
  }
}
