#include "addbasis/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "addbasis/error.hpp"
#include "addbasis/parallel.hpp"

namespace addbasis {

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, int per_decade) {
  if (lo < 1 || hi < lo) throw InputError("log grid needs 1 <= lo <= hi");
  if (per_decade < 1) throw InputError("log grid needs at least one point per decade");
  std::vector<std::uint64_t> out;
  const double step = std::log(10.0) / per_decade;
  const double span = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    const double x = static_cast<double>(lo) * std::exp(step * static_cast<double>(i));
    const auto n = std::min<std::uint64_t>(hi, static_cast<std::uint64_t>(std::llround(x)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

namespace {

std::uint64_t grid_top(std::span<const std::uint64_t> xs) {
  if (xs.empty()) throw InputError("empty grid");
  return *std::max_element(xs.begin(), xs.end());
}

std::vector<double> as_doubles(std::span<const std::uint64_t> xs) {
  return {xs.begin(), xs.end()};
}

void require_order(unsigned d, unsigned least) {
  if (d < least) throw InputError("order d must be at least " + std::to_string(least));
}

struct DecadeMeans {
  double bottom = 0;
  double top = 0;
};

// Means of v over x <= 10 x_min and over x >= x_max / 10.
DecadeMeans decade_means(const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() < 2) throw InputError("trend test needs at least two grid points");
  const double lo = x.front();
  const double hi = x.back();
  if (hi < 100 * lo) throw InputError("trend test needs a grid spanning two decades");
  DecadeMeans m;
  int nb = 0;
  int nt = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 10 * lo) {
      m.bottom += v[i];
      ++nb;
    }
    if (x[i] >= hi / 10) {
      m.top += v[i];
      ++nt;
    }
  }
  m.bottom /= nb;
  m.top /= nt;
  return m;
}

std::string describe(const Sequence& a, unsigned d) {
  return a.label() + " d=" + std::to_string(d);
}

}  // namespace

VerificationReport sandwich_check(const Sequence& a, unsigned d, std::span<const std::uint64_t> xs,
                                  const BuildOptions& options) {
  require_order(d, 1);
  const ReprTable table = build_table(a, d, grid_top(xs), options);
  VerificationReport report;
  report.claim = "sandwich";
  report.subject = describe(a, d);
  report.proxy = "exact: s(x/2)^d <= s_d(x) <= s(x)^d";
  report.grid = as_doubles(xs);
  auto& lower = report.add_column("lower");
  auto& middle = report.add_column("s_d");
  auto& upper = report.add_column("upper");
  // s(x/d)^d always holds: d members <= x/d sum to at most x. Reported beside
  // the x/2 form, which for d >= 3 can exceed s_d(x) (primes, d = 3, x = 10).
  auto& lower_d = report.add_column("lower_x_over_d");
  report.passed = true;
  std::size_t violations = 0;
  std::size_t weak_violations = 0;
  for (const auto x : xs) {
    const auto lo = checked_pow(a.count_upto(x / 2), d);
    const auto lo_d = checked_pow(a.count_upto(x / d), d);
    const auto hi = checked_pow(a.count_upto(x), d);
    if (!lo || !hi || !lo_d) throw CapacityError("s(x)^d overflows 128 bits");
    const Count s = table.s(x);
    lower.push_back(to_double(*lo));
    middle.push_back(to_double(s));
    upper.push_back(to_double(*hi));
    lower_d.push_back(to_double(*lo_d));
    if (s < *lo_d || s > *hi) ++weak_violations;
    if (s < *lo || s > *hi) {
      ++violations;
      if (report.passed) {
        report.passed = false;
        report.witness = static_cast<double>(x);
      }
    }
  }
  report.note = std::to_string(violations) + " violations; " + std::to_string(weak_violations) +
                " with s(x/d)^d as lower bound";
  return report;
}

VerificationReport ordering_check(const Sequence& a, unsigned d, std::span<const std::uint64_t> xs,
                                  const OrderingOptions& options) {
  require_order(d, 2);
  const std::uint64_t top = grid_top(xs);
  const ReprTable upper = build_table(a, d, top, options.build);
  const ReprTable lower = build_table(a, d - 1, top, options.build);
  VerificationReport report;
  report.claim = "ordering";
  report.subject = describe(a, d);
  report.proxy = "mean of s_d/s_{d-1} over the top decade >= factor * mean over the bottom decade";
  report.tolerance = options.factor;
  auto& ratio = report.add_column("ratio");
  std::size_t dropped = 0;
  for (const auto x : xs) {
    const Count below = lower.s(x);
    if (below == 0) {
      ++dropped;
      continue;
    }
    report.grid.push_back(static_cast<double>(x));
    ratio.push_back(to_double(upper.s(x)) / to_double(below));
  }
  if (dropped) report.note = std::to_string(dropped) + " grid points with s_{d-1} = 0 skipped";
  const auto means = decade_means(report.grid, ratio);
  report.passed = means.top >= options.factor * means.bottom;
  if (!report.passed) report.witness = report.grid.back();
  return report;
}

VerificationReport shift_stability(const Sequence& a, unsigned d, double exponent,
                                   std::span<const std::uint64_t> xs, const ShiftOptions& options) {
  require_order(d, 1);
  if (!(exponent > 0 && exponent < 1)) throw InputError("shift exponent must lie in (0, 1)");
  const ReprTable table = build_table(a, d, grid_top(xs), options.build);
  VerificationReport report;
  report.claim = "shift";
  report.subject = describe(a, d) + " exponent=" + format_double(exponent);
  report.proxy = "|s_d(x - L)/s_d(x) - 1| < tolerance at the largest x, L = s(x)^(1-exponent)";
  report.tolerance = options.tolerance;
  report.grid = as_doubles(xs);
  auto& shift = report.add_column("L");
  auto& ratio = report.add_column("ratio");
  for (const auto x : xs) {
    const double L = std::pow(static_cast<double>(a.count_upto(x)), 1 - exponent);
    if (!(L < static_cast<double>(x))) {
      throw PreconditionError("shift L(x) = " + format_double(L) + " is not below x = " +
                              std::to_string(x));
    }
    const Count s = table.s(x);
    shift.push_back(L);
    ratio.push_back(s == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : to_double(table.s_real(static_cast<double>(x) - L)) / to_double(s));
  }
  const double last = ratio.back();
  report.passed = std::abs(last - 1) < options.tolerance;
  if (!report.passed) report.witness = report.grid.back();
  return report;
}

VerificationReport integral_formula_check(const Sequence& a, const GrowthFn& f, const GrowthFn& eps,
                                          unsigned d, std::span<const std::uint64_t> xs,
                                          const IntegralOptions& options) {
  require_order(d, 2);
  if (!(options.quad_step > 0 && options.quad_step <= 1)) {
    throw InputError("quad_step must lie in (0, 1]");
  }
  const double alpha = f.threshold();
  const std::uint64_t top = grid_top(xs);
  for (const auto x : xs) {
    if (static_cast<double>(x) < 2 * alpha) {
      throw InputError("grid point " + std::to_string(x) + " below twice the threshold of f");
    }
  }

  const auto kind = classify(f, alpha, std::max(static_cast<double>(top), 100 * alpha));
  if (!kind.is_type1) throw PreconditionError(f.to_string() + " is not type-1 on the grid");

  VerificationReport report;
  report.claim = "integral";
  report.subject = describe(a, d) + " f=" + f.to_string() + " eps=" + eps.to_string();
  report.proxy = "|s_d(x) - I(x)| / (f(x)^(d-1) eps(x)) <= bound at every grid point";
  report.tolerance = options.bound;
  report.grid = as_doubles(xs);

  double worst_fit = 0;
  double worst_fit_x = 0;
  for (const auto x : xs) {
    const double xd = static_cast<double>(x);
    const double gap = std::abs(static_cast<double>(a.count_upto(x)) - f(xd)) / eps(xd);
    if (gap > worst_fit) {
      worst_fit = gap;
      worst_fit_x = xd;
    }
  }
  if (worst_fit > options.precondition_factor) {
    throw PreconditionError("|s(x) - f(x)| / eps(x) reaches " + format_double(worst_fit) +
                            " at x = " + format_double(worst_fit_x) + ", above " +
                            format_double(options.precondition_factor));
  }

  const ReprTable full = build_table(a, d, top, options.build);
  const ReprTable partial = build_table(a, d - 1, top, options.build);
  const auto prefix = partial.prefix();

  std::vector<double> integrals(xs.size());
  parallel_for(xs.size(), options.build.threads, [&](std::size_t i) {
    const double x = static_cast<double>(xs[i]);
    const double lo = alpha;
    const double hi = x - alpha;
    double total = 0;
    // s_{d-1} is constant on each [k, k+1); integrate f'(x - t) there.
    for (auto k = static_cast<std::uint64_t>(std::floor(lo)); static_cast<double>(k) < hi; ++k) {
      const double u = std::max(lo, static_cast<double>(k));
      const double v = std::min(hi, static_cast<double>(k + 1));
      if (v <= u) continue;
      const double weight = to_double(prefix[k]);
      if (weight == 0) continue;
      const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((v - u) / options.quad_step)));
      const double h = (v - u) / static_cast<double>(steps);
      // x - t can round below alpha at the upper end.
      auto slope = [&](double t) { return f.derivative(std::max(alpha, x - t)); };
      double sum = 0.5 * (slope(u) + slope(v));
      for (std::size_t j = 1; j < steps; ++j) sum += slope(u + h * static_cast<double>(j));
      total += weight * sum * h;
    }
    integrals[i] = total;
  });

  auto& sd = report.add_column("s_d");
  auto& integral = report.add_column("integral");
  auto& residual = report.add_column("residual_ratio");
  report.passed = true;
  double worst = -1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = static_cast<double>(xs[i]);
    const double s = to_double(full.s(xs[i]));
    const double ratio =
        std::abs(s - integrals[i]) / (std::pow(f(x), static_cast<double>(d - 1)) * eps(x));
    sd.push_back(s);
    integral.push_back(integrals[i]);
    residual.push_back(ratio);
    if (ratio > worst) {
      worst = ratio;
      if (ratio > options.bound) {
        report.passed = false;
        report.witness = x;
      }
    }
  }
  report.note = "precondition sup |s - f| / eps = " + format_double(worst_fit) +
                "; largest residual ratio " + format_double(worst);
  return report;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

// ∫_α^{x-α} g(t) dt split at x/2, with t = e^u on the left half and
// x - t = e^u on the right so endpoint singularities become smooth.
template <class G>
double split_integral(G&& g, double alpha, double x) {
  const double mid = x / 2;
  if (!(mid > alpha)) return 0;
  auto left = [&](double u) {
    const double t = std::exp(u);
    return g(t) * t;
  };
  auto right = [&](double u) {
    const double w = std::exp(u);
    return g(x - w) * w;
  };
  const double a = std::log(alpha);
  const double b = std::log(mid);
  return gauss_kronrod<double, 61>::integrate(left, a, b, 15, 1e-12) +
         gauss_kronrod<double, 61>::integrate(right, a, b, 15, 1e-12);
}

}  // namespace

std::vector<ConstantEstimate> constant_estimate(const GrowthFn& f, unsigned m,
                                                std::span<const double> xs) {
  if (m < 1) throw InputError("constant estimate needs m >= 1");
  const double alpha = f.threshold();
  const double p = static_cast<double>(m);
  std::vector<ConstantEstimate> out;
  out.reserve(xs.size());
  for (const double x : xs) {
    if (!(x > 2 * alpha)) throw InputError("grid point " + format_double(x) + " below 2 alpha");
    ConstantEstimate e;
    e.x = x;
    const double fx = f(x);
    const double plain = split_integral(
        [&](double t) { return std::pow(f(t), p - 1) * f.derivative(std::max(x - t, alpha)); },
        alpha, x);
    e.ratio = plain / std::pow(fx, p);
    const double density = split_integral(
        [&](double t) {
          return std::pow(f(t), p - 2) * f.derivative(t) * f.derivative(std::max(x - t, alpha));
        },
        alpha, x);
    e.density_ratio = density / (f.derivative(x) * std::pow(fx, p - 1));
    out.push_back(e);
  }
  return out;
}

double exponent_estimate(const Sequence& a, std::span<const std::uint64_t> xs) {
  if (xs.size() < 4) throw InputError("exponent estimate needs at least four grid points");
  std::vector<std::uint64_t> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == 0 ||
      static_cast<double>(sorted.back()) < 1000 * static_cast<double>(sorted.front())) {
    throw InputError("exponent estimate needs a positive grid spanning three decades");
  }
  const std::size_t start = sorted.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(sorted.size() - start);
  for (std::size_t i = start; i < sorted.size(); ++i) {
    const std::uint64_t s = a.count_upto(sorted[i]);
    if (s == 0) throw InputError("s(x) = 0 at grid point " + std::to_string(sorted[i]));
    const double lx = std::log(static_cast<double>(sorted[i]));
    const double ly = std::log(static_cast<double>(s));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

VerificationReport second_moment_ratio(const Sequence& a, unsigned d,
                                       std::span<const std::uint64_t> xs,
                                       const SecondMomentOptions& options) {
  require_order(d, 1);
  const std::uint64_t top = grid_top(xs);
  const ReprTable table = build_table(a, d, top, options.build);
  std::vector<long double> squares(top + 1);
  long double running = 0;
  for (std::uint64_t n = 0; n <= top; ++n) {
    const auto r = static_cast<long double>(to_double(table.r(n)));
    running += r * r;
    squares[n] = running;
  }
  VerificationReport report;
  report.claim = "second-moment";
  report.subject = describe(a, d);
  report.proxy = "mean rho over the top decade <= trend_factor * mean over the bottom decade";
  report.tolerance = options.trend_factor;
  auto& rho = report.add_column("rho");
  std::size_t dropped = 0;
  for (const auto x : xs) {
    const auto s = static_cast<long double>(to_double(table.s(x)));
    if (s == 0) {
      ++dropped;
      continue;
    }
    report.grid.push_back(static_cast<double>(x));
    rho.push_back(static_cast<double>(static_cast<long double>(x) * squares[x] / (s * s)));
  }
  if (dropped) report.note = std::to_string(dropped) + " grid points with s_d = 0 skipped";
  const auto means = decade_means(report.grid, rho);
  report.passed = means.top <= options.trend_factor * means.bottom;
  if (!report.passed) report.witness = report.grid.back();
  return report;
}

}  // namespace addbasis
