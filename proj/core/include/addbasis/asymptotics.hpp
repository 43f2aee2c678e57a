#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "addbasis/growth.hpp"
#include "addbasis/repr.hpp"
#include "addbasis/report.hpp"
#include "addbasis/sequences.hpp"

namespace addbasis {

// Integers spaced evenly in log x from lo to hi inclusive, duplicates removed.
std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, int per_decade);

// s(x/2)^d <= s_d(x) <= s(x)^d, exactly, at every grid point.
VerificationReport sandwich_check(const Sequence& a, unsigned d, std::span<const std::uint64_t> xs,
                                  const BuildOptions& options = {});

struct OrderingOptions {
  double factor = 2.0;
  BuildOptions build;
};

// s_d / s_{d-1} must grow: the mean over the top decade of the grid has to
// exceed the mean over the bottom decade by `factor`. Grid points where
// s_{d-1} vanishes are dropped.
VerificationReport ordering_check(const Sequence& a, unsigned d, std::span<const std::uint64_t> xs,
                                  const OrderingOptions& options = {});

struct ShiftOptions {
  double tolerance = 0.05;
  BuildOptions build;
};

// s_d(x - L(x)) / s_d(x) with L(x) = s(x)^(1 - exponent); passes when the
// ratio at the largest x is within tolerance of 1.
VerificationReport shift_stability(const Sequence& a, unsigned d, double exponent,
                                   std::span<const std::uint64_t> xs,
                                   const ShiftOptions& options = {});

struct IntegralOptions {
  // Trapezoid sub-steps per unit cell are 1/quad_step.
  double quad_step = 1.0;
  // Pass when |s_d - I| / (f^(d-1) eps) stays below this on the grid.
  double bound = 10.0;
  // Refuse unless |s - f| <= precondition_factor * eps on the grid.
  double precondition_factor = 10.0;
  BuildOptions build;
};

// Compares s_d(x) with I(x) = ∫_α^{x-α} s_{d-1}(t) f'(x-t) dt, the integral
// evaluated with the exact step function s_{d-1}. PreconditionError when f
// is not type-1 on the grid or s - f is not O(eps).
VerificationReport integral_formula_check(const Sequence& a, const GrowthFn& f, const GrowthFn& eps,
                                          unsigned d, std::span<const std::uint64_t> xs,
                                          const IntegralOptions& options = {});

struct ConstantEstimate {
  double x = 0;
  // ∫_α^{x-α} f(t)^(m-1) f'(x-t) dt / f(x)^m
  double ratio = 0;
  // ∫_α^{x-α} f(t)^(m-2) f'(t) f'(x-t) dt / (f'(x) f(x)^(m-1))
  double density_ratio = 0;
};

std::vector<ConstantEstimate> constant_estimate(const GrowthFn& f, unsigned m,
                                                std::span<const double> xs);

// Least-squares slope of log s(x) against log x over the top half of the grid.
// The grid has to span at least three decades.
double exponent_estimate(const Sequence& a, std::span<const std::uint64_t> xs);

struct SecondMomentOptions {
  // Largest tolerated growth of the top-decade mean over the bottom-decade mean.
  double trend_factor = 2.0;
  BuildOptions build;
};

// rho(x) = x * sum_{n<=x} r_d(n)^2 / s_d(x)^2; passes when rho shows no
// growth trend across the grid.
VerificationReport second_moment_ratio(const Sequence& a, unsigned d,
                                       std::span<const std::uint64_t> xs,
                                       const SecondMomentOptions& options = {});

}  // namespace addbasis
