#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "addbasis/growth.hpp"
#include "addbasis/repr.hpp"
#include "addbasis/report.hpp"
#include "addbasis/rng.hpp"
#include "addbasis/sequences.hpp"

namespace addbasis {

// Inclusion probabilities alpha_n of the random-sequence model, zero below n0
// and clamped to [0, 1].
class AlphaSpec {
 public:
  struct Derivative {  // alpha_n = min(1, K f'(n))
    GrowthFn f;
    double gain;
  };
  struct Constant {
    double p;
  };
  struct InverseLog {};  // 1 / log n
  struct Table {         // alpha_n = values[n], zero past the end
    std::vector<double> values;
  };
  using Rule = std::variant<Derivative, Constant, InverseLog, Table>;

  // n0 = ceil(threshold of f).
  static AlphaSpec derivative(const GrowthFn& f, double gain = 1.0);
  static AlphaSpec constant(double p, std::uint64_t n0 = 0);
  static AlphaSpec inverse_log(std::uint64_t n0 = 3);
  // InputError unless every value lies in [0, 1].
  static AlphaSpec from_table(std::vector<double> values);

  // "const:P[:N0]", "invlog[:N0]", or a growth function string (with `gain`).
  static AlphaSpec parse(std::string_view text, double gain = 1.0);
  std::string to_string() const;

  const Rule& rule() const { return rule_; }
  std::uint64_t start() const { return n0_; }
  // nullptr unless the rule is Derivative.
  const GrowthFn* growth() const;
  double gain() const;

  double alpha(std::uint64_t n) const;
  // alpha_0 .. alpha_horizon
  std::vector<double> table(std::uint64_t horizon) const;

 private:
  AlphaSpec(Rule rule, std::uint64_t n0) : rule_(std::move(rule)), n0_(n0) {}
  Rule rule_;
  std::uint64_t n0_;
};

// n is included iff counter_uniform(seed, n) < alpha_n. Sharing the seed
// across specs couples them monotonically: larger alpha never drops members.
Sequence sample_sequence(const AlphaSpec& spec, std::uint64_t horizon, std::uint64_t seed);

// sum_{n <= x} alpha_n
double exact_expectation_s(const AlphaSpec& spec, std::uint64_t x);

// E r_2(n) = sum_{k < n/2} 2 alpha_k alpha_{n-k} + [n even] alpha_{n/2}
double exact_expectation_r2(const AlphaSpec& spec, std::uint64_t n);

struct PairExpectations {
  std::vector<double> r2;    // E r_2(n)
  std::vector<double> rho2;  // E rho_2(n), pairs k < n - k
};

// All n <= horizon at once through a floating-point FFT convolution of the
// alpha vector. Not exact; exact_expectation_r2 is the reference.
PairExpectations expectation_table(const AlphaSpec& spec, std::uint64_t horizon);

struct SampleRunConfig {
  std::uint64_t master_seed = kDefaultSeed;
  std::size_t trials = 100;
  std::uint64_t horizon = 0;
  unsigned threads = 0;
  std::size_t max_trials = 100000;
};

struct ProbeStatistics {
  std::uint64_t n = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double std_error = 0;
  double min = 0;
  double max = 0;
  // mean / (f'(n) f(n)^(d-1)); NaN unless the spec has a growth function.
  double normalized = 0;
  // exact E r_2(n) when d = 2, NaN otherwise.
  double exact = 0;
};

struct SampleRun {
  SampleRunConfig config;
  unsigned d = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<ProbeStatistics> probes;
};

// Monte Carlo estimate of E r_d(n) at the probe points. Each trial samples a
// sequence with its own derived seed and builds the exact table.
SampleRun mc_expectation_rd(const AlphaSpec& spec, unsigned d,
                            std::span<const std::uint64_t> probe_ns,
                            const SampleRunConfig& config);

// min{(1+e) log(1+e) - e, e^2/2}; InputError unless epsilon > 0.
double chernoff_delta(double epsilon);
// 2 exp(-delta(epsilon) * expectation)
double chernoff_ceiling(double epsilon, double expectation);

struct ConcentrationOptions {
  double epsilon = 0.98;
  std::uint64_t n_threshold = 1000;
  // Fraction of trials that must have r_2(n) > 0 on [n_threshold, N].
  double basis_fraction = 0.95;
  // Allowance above the ceiling, in binomial standard deviations.
  double sigmas = 3.0;
  // f'(x) f(x) / log x must keep at least this fraction of its value at
  // n_threshold up to kConcentrationProbeLimit.
  double growth_floor = 0.5;
};

inline constexpr double kConcentrationProbeLimit = 1e30;

struct ConcentrationReport {
  // grid: n; columns exceedance, chernoff_ceiling, expected_rho2
  VerificationReport per_n;
  std::vector<double> min_r2;  // per trial, over [n_threshold, N]
  double basis_fraction = 0;
  std::size_t violations = 0;
  bool passed = false;
};

// Per trial and per n >= n_threshold, records whether
// |rho_2(n)/E rho_2(n) - 1| > epsilon and compares the frequencies with the
// Chernoff ceiling. PreconditionError unless f is type-2 with f'f >> log.
ConcentrationReport concentration_experiment(const AlphaSpec& spec, const SampleRunConfig& run,
                                             const ConcentrationOptions& options = {});

// max(1, ceil(3 / c1)) with c1 = min over [lo, hi] of E rho_2(n) / log n at gain 1.
double default_gain(const GrowthFn& f, std::uint64_t lo, std::uint64_t hi);

struct PropagationOptions {
  double factor = 5.0;
  BuildOptions build;
};

// For d = h..d_max: sup/inf of r_d(n) / (f'(n) f(n)^(d-1)) over n in [N/2, N].
// Grid holds d; passes when every band stays below `factor`.
VerificationReport regularity_propagation_check(const Sequence& omega, const GrowthFn& f,
                                                unsigned h, unsigned d_max,
                                                const PropagationOptions& options = {});

}  // namespace addbasis
