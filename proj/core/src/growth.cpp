#include "addbasis/growth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "addbasis/error.hpp"
#include "addbasis/report.hpp"

namespace addbasis {

namespace {

constexpr double kLogStep = 0.01;
constexpr double kDomainSlack = 1e-12;

int sign_of(double v) { return (v > 0) - (v < 0); }

// Small recursive-descent reader for the spec strings.
class GrowthParser {
 public:
  explicit GrowthParser(std::string_view text) : text_(text) {}

  GrowthFn parse() {
    double c = 1.0;
    double a = 0.0;
    double b = 0.0;
    bool divide = false;
    skip_space();
    if (at_end()) fail("empty growth function");
    for (;;) {
      factor(c, a, b, divide);
      skip_space();
      if (at_end()) break;
      const char op = text_[pos_];
      if (op != '*' && op != '/') fail("expected '*' or '/'");
      divide = op == '/';
      ++pos_;
      skip_space();
    }
    if (!(c > 0) || !std::isfinite(c)) fail("coefficient must be positive");
    return GrowthFn(c, a, b);
  }

 private:
  void factor(double& c, double& a, double& b, bool divide) {
    const double sign = divide ? -1.0 : 1.0;
    if (consume("log(x)")) {
      b += sign * power_suffix();
    } else if (consume("sqrt(x)")) {
      a += sign * 0.5 * power_suffix();
    } else if (consume("x")) {
      a += sign * power_suffix();
    } else {
      const double value = number();
      const double p = power_suffix();
      const double factor = std::pow(value, p);
      c = divide ? c / factor : c * factor;
    }
  }

  double power_suffix() {
    skip_space();
    if (!consume("^")) return 1.0;
    skip_space();
    if (consume("(")) {
      const double num = number();
      skip_space();
      double value = num;
      if (consume("/")) {
        const double den = number();
        if (den == 0) fail("zero denominator in exponent");
        value = num / den;
      }
      skip_space();
      if (!consume(")")) fail("expected ')'");
      return value;
    }
    return number();
  }

  double number() {
    skip_space();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("malformed growth function '" + std::string(text_) + "' at offset " +
                     std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<double> log_spaced(double lo, double hi, int per_decade) {
  std::vector<double> xs;
  if (!(lo > 0) || !(hi > lo) || per_decade < 1) return xs;
  const double step = std::log(10.0) / per_decade;
  const double span = std::log(hi / lo);
  const auto count = static_cast<std::size_t>(std::floor(span / step));
  xs.reserve(count + 2);
  for (std::size_t i = 0; i <= count; ++i) xs.push_back(lo * std::exp(step * static_cast<double>(i)));
  if (xs.back() < hi * (1 - 1e-12)) xs.push_back(hi);
  return xs;
}

bool is_monotone(const std::vector<double>& v) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) up = false;
    if (v[i] > v[i - 1]) down = false;
  }
  return up || down;
}

template <class Fn>
VariationBound variation_of(Fn&& fn, const std::vector<double>& grid, double lo, double hi,
                            double lambda) {
  VariationBound out;
  out.lambda = lambda;
  out.inf_ratio = std::numeric_limits<double>::infinity();
  out.sup_ratio = -std::numeric_limits<double>::infinity();
  for (const double x : grid) {
    const double y = lambda * x;
    if (y < lo || y > hi) continue;
    const double ratio = fn(y) / fn(x);
    out.inf_ratio = std::min(out.inf_ratio, ratio);
    out.sup_ratio = std::max(out.sup_ratio, ratio);
    out.ratio_at_top = ratio;
  }
  return out;
}

}  // namespace

GrowthFn::GrowthFn(double coefficient, double exponent, double log_exponent)
    : c_(coefficient), a_(exponent), b_(log_exponent), alpha_(0) {
  if (!(c_ > 0) || !std::isfinite(c_) || !std::isfinite(a_) || !std::isfinite(b_)) {
    throw InputError("growth function needs a finite positive coefficient and finite exponents");
  }
  alpha_ = locate_threshold();
}

GrowthFn::GrowthFn(double coefficient, double exponent, double log_exponent, double threshold)
    : c_(coefficient), a_(exponent), b_(log_exponent), alpha_(threshold) {
  if (!(c_ > 0) || !std::isfinite(c_) || !std::isfinite(a_) || !std::isfinite(b_)) {
    throw InputError("growth function needs a finite positive coefficient and finite exponents");
  }
  if (!(threshold > 1.0) && b_ != 0.0) throw InputError("log factors need a threshold above 1");
  if (!(threshold > 0.0)) throw InputError("threshold must be positive");
}

GrowthFn GrowthFn::parse(std::string_view text) { return GrowthParser(text).parse(); }

double GrowthFn::raw(double x, int order) const {
  const double log_x = std::log(x);
  // (log x)^(b - j), treating the b = 0 terms as absent so log x may vanish.
  auto log_pow = [&](double p) { return std::pow(log_x, p); };
  switch (order) {
    case 0:
      return c_ * std::pow(x, a_) * (b_ == 0 ? 1.0 : log_pow(b_));
    case 1: {
      double inner = a_ * (b_ == 0 ? 1.0 : log_pow(b_));
      if (b_ != 0) inner += b_ * log_pow(b_ - 1);
      return c_ * std::pow(x, a_ - 1) * inner;
    }
    case 2: {
      double inner = a_ * (a_ - 1) * (b_ == 0 ? 1.0 : log_pow(b_));
      if (b_ != 0) {
        inner += b_ * (2 * a_ - 1) * log_pow(b_ - 1);
        inner += b_ * (b_ - 1) * log_pow(b_ - 2);
      }
      return c_ * std::pow(x, a_ - 2) * inner;
    }
    default:
      throw InputError("derivative order must be 0, 1 or 2");
  }
}

double GrowthFn::eval(double x, int order) const {
  if (order < 0 || order > 2) throw InputError("derivative order must be 0, 1 or 2");
  if (!(x >= alpha_ * (1 - kDomainSlack))) {
    throw DomainError("f evaluated at x = " + format_double(x) + " below threshold " +
                      format_double(alpha_));
  }
  return raw(std::max(x, alpha_), order);
}

double GrowthFn::locate_threshold() const {
  const double top = kThresholdSearchLimit;
  const int s1 = sign_of(raw(top, 1));
  const int s2 = sign_of(raw(top, 2));
  auto good = [&](double x) {
    const double v0 = raw(x, 0);
    const double v1 = raw(x, 1);
    const double v2 = raw(x, 2);
    if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2)) return false;
    if (!(v0 > 0)) return false;
    if (sign_of(v1) != s1) return false;
    const int sg = sign_of(v2);
    return sg == 0 || sg == s2;
  };
  if (!good(top)) {
    throw DomainError("f = " + to_string() + " is not positive with monotone f' near " +
                      format_double(top));
  }
  const auto steps = static_cast<std::size_t>(std::ceil(std::log(top) / kLogStep));
  // Walk down from the top to the last failing grid point.
  std::size_t first_good = steps;
  for (std::size_t i = steps; i >= 1; --i) {
    if (!good(std::exp(kLogStep * static_cast<double>(i)))) break;
    first_good = i;
  }
  double hi_u = kLogStep * static_cast<double>(first_good);
  if (first_good == 1) return std::exp(hi_u);
  double lo_u = hi_u - kLogStep;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo_u + hi_u);
    if (good(std::exp(mid))) {
      hi_u = mid;
    } else {
      lo_u = mid;
    }
  }
  return std::exp(hi_u);
}

std::string GrowthFn::to_string() const {
  return format_double(c_) + "*x^" + format_double(a_) + "*log(x)^" + format_double(b_);
}

Classification classify(const GrowthFn& f, double lo, double hi, const ClassifyOptions& options) {
  if (options.lambdas.empty()) throw InputError("classify needs at least one lambda");
  const double max_lambda = *std::max_element(options.lambdas.begin(), options.lambdas.end());
  if (lo < f.threshold() * (1 - kDomainSlack)) {
    throw InputError("classification range starts below the threshold of " + f.to_string());
  }
  if (hi / std::max(1.0, max_lambda) < f.threshold()) {
    throw InputError("classification range too short for the largest lambda");
  }
  const auto grid = log_spaced(lo, hi, options.points_per_decade);
  if (grid.size() < 2) throw InputError("empty classification grid");

  std::vector<double> values;
  std::vector<double> slopes;
  values.reserve(grid.size());
  slopes.reserve(grid.size());
  for (const double x : grid) {
    values.push_back(f(x));
    slopes.push_back(f.derivative(x));
  }

  Classification out;
  out.positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0; });
  out.monotone = is_monotone(values);
  out.derivative_positive = std::all_of(slopes.begin(), slopes.end(), [](double v) { return v > 0; });
  out.derivative_monotone = is_monotone(slopes);

  out.o_regular = out.positive;
  out.derivative_o_regular = out.derivative_positive;
  for (const double lambda : options.lambdas) {
    auto vf = variation_of([&](double x) { return f(x); }, grid, lo, hi, lambda);
    auto vd = variation_of([&](double x) { return f.derivative(x); }, grid, lo, hi, lambda);
    if (!(vf.sup_ratio / vf.inf_ratio <= options.variation_factor)) out.o_regular = false;
    if (!(vd.sup_ratio / vd.inf_ratio <= options.variation_factor)) out.derivative_o_regular = false;
    out.variation.push_back(vf);
    out.derivative_variation.push_back(vd);
  }

  const double top = grid.back();
  const double below = std::max(lo, top / 10);
  out.derivative_bounded = f.derivative(top) <= f.derivative(below) * (1 + options.trend_tolerance);
  out.divergent = f(top) >= f(below) * (1 + options.trend_tolerance);

  out.is_type1 = out.positive && out.monotone && out.o_regular;
  out.is_type2 = out.is_type1 && out.divergent && out.derivative_positive &&
                 out.derivative_monotone && out.derivative_o_regular && out.derivative_bounded;
  return out;
}

}  // namespace addbasis
