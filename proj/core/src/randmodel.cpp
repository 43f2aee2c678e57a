#include "addbasis/randmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>

#include <fftw3.h>

#include "addbasis/error.hpp"
#include "addbasis/parallel.hpp"

namespace addbasis {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_number(std::string_view text, const char* what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_index(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("malformed start index '" + std::string(text) + "'");
  }
  return value;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

AlphaSpec AlphaSpec::derivative(const GrowthFn& f, double gain) {
  if (!(gain >= 1) || !std::isfinite(gain)) throw InputError("gain K must be a finite value >= 1");
  return AlphaSpec(Derivative{f, gain}, static_cast<std::uint64_t>(std::ceil(f.threshold())));
}

AlphaSpec AlphaSpec::constant(double p, std::uint64_t n0) {
  if (!(p >= 0 && p <= 1)) throw InputError("constant probability must lie in [0, 1]");
  return AlphaSpec(Constant{p}, n0);
}

AlphaSpec AlphaSpec::inverse_log(std::uint64_t n0) {
  if (n0 < 2) throw InputError("1/log n needs n0 >= 2");
  return AlphaSpec(InverseLog{}, n0);
}

AlphaSpec AlphaSpec::from_table(std::vector<double> values) {
  for (const double v : values) {
    if (!(v >= 0 && v <= 1)) throw InputError("tabulated probabilities must lie in [0, 1]");
  }
  return AlphaSpec(Table{std::move(values)}, 0);
}

AlphaSpec AlphaSpec::parse(std::string_view text, double gain) {
  if (text.starts_with("const:")) {
    const std::string_view rest = text.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) return constant(parse_number(rest, "probability"));
    return constant(parse_number(rest.substr(0, colon), "probability"),
                    parse_index(rest.substr(colon + 1)));
  }
  if (text == "invlog") return inverse_log();
  if (text.starts_with("invlog:")) return inverse_log(parse_index(text.substr(7)));
  return derivative(GrowthFn::parse(text), gain);
}

std::string AlphaSpec::to_string() const {
  return std::visit(
      overloaded{
          [](const Derivative& r) { return r.f.to_string(); },
          [this](const Constant& r) {
            return "const:" + format_double(r.p) + ":" + std::to_string(n0_);
          },
          [this](const InverseLog&) { return "invlog:" + std::to_string(n0_); },
          [](const Table& r) { return "table[" + std::to_string(r.values.size()) + "]"; },
      },
      rule_);
}

const GrowthFn* AlphaSpec::growth() const {
  const auto* r = std::get_if<Derivative>(&rule_);
  return r ? &r->f : nullptr;
}

double AlphaSpec::gain() const {
  const auto* r = std::get_if<Derivative>(&rule_);
  return r ? r->gain : 1.0;
}

double AlphaSpec::alpha(std::uint64_t n) const {
  if (n < n0_) return 0.0;
  const double x = static_cast<double>(n);
  const double raw = std::visit(
      overloaded{
          [x](const Derivative& r) { return r.gain * r.f.derivative(x); },
          [](const Constant& r) { return r.p; },
          [x](const InverseLog&) { return 1.0 / std::log(x); },
          [n](const Table& r) { return n < r.values.size() ? r.values[n] : 0.0; },
      },
      rule_);
  return std::clamp(raw, 0.0, 1.0);
}

std::vector<double> AlphaSpec::table(std::uint64_t horizon) const {
  std::vector<double> out(horizon + 1);
  for (std::uint64_t n = 0; n <= horizon; ++n) out[n] = alpha(n);
  return out;
}

Sequence sample_sequence(const AlphaSpec& spec, std::uint64_t horizon, std::uint64_t seed) {
  std::vector<std::uint8_t> bits(horizon + 1, 0);
  for (std::uint64_t n = spec.start(); n <= horizon; ++n) {
    bits[n] = counter_uniform(seed, n) < spec.alpha(n) ? 1 : 0;
  }
  return Sequence::from_indicator(std::move(bits), "sample(" + spec.to_string() + ")");
}

double exact_expectation_s(const AlphaSpec& spec, std::uint64_t x) {
  long double total = 0;
  for (std::uint64_t n = spec.start(); n <= x; ++n) total += spec.alpha(n);
  return static_cast<double>(total);
}

double exact_expectation_r2(const AlphaSpec& spec, std::uint64_t n) {
  long double total = 0;
  for (std::uint64_t k = 0; 2 * k < n; ++k) total += 2.0L * spec.alpha(k) * spec.alpha(n - k);
  if (n % 2 == 0) total += spec.alpha(n / 2);
  return static_cast<double>(total);
}

namespace {

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Full self-convolution (sum_k a_k a_{n-k}) for n <= horizon.
std::vector<double> self_convolution(const std::vector<double>& a) {
  const std::size_t n = a.size();
  const std::size_t length = 2 * n;
  const std::size_t bins = length / 2 + 1;
  double* real = fftw_alloc_real(length);
  fftw_complex* spectrum = fftw_alloc_complex(bins);
  fftw_plan forward;
  fftw_plan backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(length), real, spectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(length), spectrum, real, FFTW_ESTIMATE);
  }
  std::fill(real, real + length, 0.0);
  std::copy(a.begin(), a.end(), real);
  fftw_execute(forward);
  for (std::size_t i = 0; i < bins; ++i) {
    const double re = spectrum[i][0];
    const double im = spectrum[i][1];
    spectrum[i][0] = re * re - im * im;
    spectrum[i][1] = 2 * re * im;
  }
  fftw_execute(backward);
  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(length);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, real[i] * scale);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(real);
  fftw_free(spectrum);
  return out;
}

}  // namespace

PairExpectations expectation_table(const AlphaSpec& spec, std::uint64_t horizon) {
  const auto alpha = spec.table(horizon);
  const auto conv = self_convolution(alpha);
  PairExpectations out;
  out.r2.resize(horizon + 1);
  out.rho2.resize(horizon + 1);
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    // conv counts the diagonal k = n/2 as alpha^2; independence gives alpha there.
    const double diag = n % 2 == 0 ? alpha[n / 2] : 0.0;
    const double off = n % 2 == 0 ? conv[n] - diag * diag : conv[n];
    out.rho2[n] = std::max(0.0, off / 2);
    out.r2[n] = std::max(0.0, off + diag);
  }
  return out;
}

SampleRun mc_expectation_rd(const AlphaSpec& spec, unsigned d,
                            std::span<const std::uint64_t> probe_ns,
                            const SampleRunConfig& config) {
  if (d < 1) throw InputError("order d must be at least 1");
  if (probe_ns.empty()) throw InputError("no probe points");
  if (config.trials < 2) throw InputError("Monte Carlo needs at least two trials");
  if (config.trials > config.max_trials) {
    throw ResourceError("requested " + std::to_string(config.trials) + " trials, budget is " +
                        std::to_string(config.max_trials));
  }
  const std::uint64_t top = *std::max_element(probe_ns.begin(), probe_ns.end());
  if (top > config.horizon) throw RangeError("probe point beyond the sampling horizon");

  SampleRun run;
  run.config = config;
  run.d = d;
  run.trial_seeds.resize(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    run.trial_seeds[t] = derive_seed(config.master_seed, t);
  }

  std::vector<std::vector<double>> values(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    const Sequence omega = sample_sequence(spec, config.horizon, run.trial_seeds[t]);
    BuildOptions build;
    build.threads = 1;
    const ReprTable table = build_table(omega, d, top, build);
    auto& row = values[t];
    row.reserve(probe_ns.size());
    for (const auto n : probe_ns) row.push_back(to_double(table.r(n)));
  });

  const auto trials = static_cast<double>(config.trials);
  const GrowthFn* f = spec.growth();
  for (std::size_t i = 0; i < probe_ns.size(); ++i) {
    ProbeStatistics stat;
    stat.n = probe_ns[i];
    stat.min = std::numeric_limits<double>::infinity();
    stat.max = -std::numeric_limits<double>::infinity();
    // Fixed trial order keeps the floating-point sums reproducible.
    double sum = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      sum += values[t][i];
      stat.min = std::min(stat.min, values[t][i]);
      stat.max = std::max(stat.max, values[t][i]);
    }
    stat.mean = sum / trials;
    double squares = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const double dev = values[t][i] - stat.mean;
      squares += dev * dev;
    }
    stat.variance = squares / (trials - 1);
    stat.std_error = std::sqrt(stat.variance / trials);
    const double x = static_cast<double>(stat.n);
    stat.normalized = f && x >= f->threshold()
                          ? stat.mean / (f->derivative(x) * std::pow((*f)(x), d - 1.0))
                          : kNaN;
    stat.exact = d == 2 ? exact_expectation_r2(spec, stat.n) : kNaN;
    run.probes.push_back(stat);
  }
  return run;
}

double chernoff_delta(double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InputError("Chernoff epsilon must be positive");
  const double first = (1 + epsilon) * std::log1p(epsilon) - epsilon;
  return std::min(first, epsilon * epsilon / 2);
}

double chernoff_ceiling(double epsilon, double expectation) {
  return 2 * std::exp(-chernoff_delta(epsilon) * expectation);
}

namespace {

void check_concentration_regime(const GrowthFn& f, std::uint64_t lo, std::uint64_t horizon,
                                double floor) {
  const double start = std::max(static_cast<double>(lo), f.threshold());
  const double end = std::max(static_cast<double>(horizon), 100 * start);
  const auto kind = classify(f, start, end);
  if (!kind.is_type2) {
    throw PreconditionError(f.to_string() + " is not type-2 on [" + format_double(start) + ", " +
                            format_double(end) + "]");
  }
  // f'(x) f(x) must not be o(log x); read the trend over a long log range.
  auto q = [&](double x) { return f.derivative(x) * f(x) / std::log(x); };
  const double base = q(start);
  double lowest = base;
  const double step = std::log(10.0) / 4;
  for (double u = std::log(start); u <= std::log(kConcentrationProbeLimit); u += step) {
    lowest = std::min(lowest, q(std::exp(u)));
  }
  if (!(lowest >= floor * base)) {
    throw PreconditionError("f'(x) f(x) / log x falls to " + format_double(lowest / base) +
                            " of its value at " + format_double(start) +
                            " by x = 1e30; the Chernoff argument needs f'f >> log");
  }
}

}  // namespace

ConcentrationReport concentration_experiment(const AlphaSpec& spec, const SampleRunConfig& run,
                                             const ConcentrationOptions& options) {
  const GrowthFn* f = spec.growth();
  if (!f) throw PreconditionError("concentration needs a growth-function spec");
  const std::uint64_t N = run.horizon;
  const std::uint64_t lo = options.n_threshold;
  if (lo < 2 || lo > N) throw InputError("n_threshold must lie in [2, horizon]");
  if (run.trials < 1) throw InputError("concentration needs at least one trial");
  if (run.trials > run.max_trials) throw ResourceError("trial budget exceeded");
  check_concentration_regime(*f, lo, N, options.growth_floor);

  const auto expected = expectation_table(spec, N);
  const std::size_t span = N - lo + 1;
  std::vector<std::vector<std::uint8_t>> exceeded(run.trials);
  std::vector<double> min_r2(run.trials);
  parallel_for(run.trials, run.threads, [&](std::size_t t) {
    const Sequence omega = sample_sequence(spec, N, derive_seed(run.master_seed, t));
    BuildOptions build;
    build.threads = 1;
    const ReprTable table = build_table(omega, 2, N, build);
    auto& flags = exceeded[t];
    flags.assign(span, 0);
    Count lowest = kCountMax;
    for (std::uint64_t n = lo; n <= N; ++n) {
      const Count r = table.r(n);
      lowest = std::min(lowest, r);
      const Count diagonal = n % 2 == 0 && omega.contains(n / 2) ? 1 : 0;
      const double rho = to_double((r - diagonal) / 2);
      const double mean = expected.rho2[n];
      flags[n - lo] = mean > 0 && std::abs(rho / mean - 1) > options.epsilon ? 1 : 0;
    }
    min_r2[t] = to_double(lowest);
  });

  ConcentrationReport out;
  auto& report = out.per_n;
  report.claim = "concentration";
  report.subject = spec.to_string() + " K=" + format_double(spec.gain());
  report.proxy = "exceedance frequency <= chernoff ceiling + " + format_double(options.sigmas) +
                 " binomial sd at every n; r_2 > 0 on [n_threshold, N] in enough trials";
  report.tolerance = options.epsilon;
  auto& freq = report.add_column("exceedance");
  auto& ceiling = report.add_column("chernoff_ceiling");
  auto& mean = report.add_column("expected_rho2");
  const auto trials = static_cast<double>(run.trials);
  for (std::uint64_t n = lo; n <= N; ++n) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < run.trials; ++t) hits += exceeded[t][n - lo];
    const double fr = static_cast<double>(hits) / trials;
    const double c = chernoff_ceiling(options.epsilon, expected.rho2[n]);
    const double cap = std::min(c, 1.0);
    const double allowance = options.sigmas * std::sqrt(cap * (1 - cap) / trials);
    report.grid.push_back(static_cast<double>(n));
    freq.push_back(fr);
    ceiling.push_back(c);
    mean.push_back(expected.rho2[n]);
    if (fr > c + allowance) {
      if (!report.witness) report.witness = static_cast<double>(n);
      ++out.violations;
    }
  }
  out.min_r2 = std::move(min_r2);
  const auto covered = std::count_if(out.min_r2.begin(), out.min_r2.end(),
                                     [](double v) { return v > 0; });
  out.basis_fraction = static_cast<double>(covered) / trials;
  out.passed = out.violations == 0 && out.basis_fraction >= options.basis_fraction;
  report.passed = out.passed;
  report.note = std::to_string(out.violations) + " ceiling violations; r_2 > 0 throughout in " +
                std::to_string(covered) + " of " + std::to_string(run.trials) + " trials";
  return out;
}

double default_gain(const GrowthFn& f, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || hi < lo) throw InputError("default gain needs 2 <= lo <= hi");
  const auto expected = expectation_table(AlphaSpec::derivative(f, 1.0), hi);
  double c1 = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = lo; n <= hi; ++n) {
    c1 = std::min(c1, expected.rho2[n] / std::log(static_cast<double>(n)));
  }
  if (!(c1 > 0)) throw PreconditionError("E rho_2(n) vanishes on the range; no finite gain");
  return std::max(1.0, std::ceil(3 / c1));
}

VerificationReport regularity_propagation_check(const Sequence& omega, const GrowthFn& f,
                                                unsigned h, unsigned d_max,
                                                const PropagationOptions& options) {
  if (h < 1 || d_max < h) throw InputError("propagation check needs 1 <= h <= d_max");
  const std::uint64_t N = omega.horizon();
  const std::uint64_t lo = std::max<std::uint64_t>(
      N / 2, static_cast<std::uint64_t>(std::ceil(f.threshold())));
  if (lo > N) throw InputError("sequence horizon below the threshold of f");

  VerificationReport report;
  report.claim = "propagation";
  report.subject = omega.label() + " f=" + f.to_string();
  report.proxy = "sup/inf of r_d/(f' f^(d-1)) over [N/2, N] <= factor for each d";
  report.tolerance = options.factor;
  auto& inf = report.add_column("inf_ratio");
  auto& sup = report.add_column("sup_ratio");
  auto& band = report.add_column("band");
  report.passed = true;
  for (unsigned d = h; d <= d_max; ++d) {
    const ReprTable table = build_table(omega, d, N, options.build);
    double low = std::numeric_limits<double>::infinity();
    double high = 0;
    for (std::uint64_t n = lo; n <= N; ++n) {
      const double x = static_cast<double>(n);
      const double ratio = to_double(table.r(n)) / (f.derivative(x) * std::pow(f(x), d - 1.0));
      low = std::min(low, ratio);
      high = std::max(high, ratio);
    }
    const double width = low > 0 ? high / low : std::numeric_limits<double>::infinity();
    report.grid.push_back(d);
    inf.push_back(low);
    sup.push_back(high);
    band.push_back(width);
    if (!(width <= options.factor) && report.passed) {
      report.passed = false;
      report.witness = d;
    }
  }
  return report;
}

}  // namespace addbasis
