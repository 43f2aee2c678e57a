#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addbasis {

// f(x) = c * x^a * (log x)^b, the closed family every growth function in the
// workbench is drawn from. The threshold is the least x from which f, f' and
// f'' keep a fixed sign (so f and f' are monotone) up to kThresholdSearchLimit;
// integrals and probability rules start there.
class GrowthFn {
 public:
  static constexpr double kThresholdSearchLimit = 1e15;

  GrowthFn(double coefficient, double exponent, double log_exponent);
  GrowthFn(double coefficient, double exponent, double log_exponent, double threshold);

  // Parses products and quotients of a constant, x^p, log(x)^q and sqrt(x),
  // e.g. "2*x^0.5*log(x)^-1", "x/log(x)", "x^(1/3)*log(x)^(1/3)".
  // Throws InputError on anything else.
  static GrowthFn parse(std::string_view text);

  double coefficient() const { return c_; }
  double exponent() const { return a_; }
  double log_exponent() const { return b_; }
  double threshold() const { return alpha_; }

  // order 0, 1 or 2. DomainError below the threshold.
  double eval(double x, int order = 0) const;
  double operator()(double x) const { return eval(x, 0); }
  double derivative(double x) const { return eval(x, 1); }
  double second_derivative(double x) const { return eval(x, 2); }

  // Canonical "c*x^a*log(x)^b"; parse(to_string()) reproduces the function.
  std::string to_string() const;

 private:
  // Closed form without the domain check.
  double raw(double x, int order) const;
  double locate_threshold() const;

  double c_;
  double a_;
  double b_;
  double alpha_;
};

struct VariationBound {
  double lambda = 0;
  double inf_ratio = 0;
  double sup_ratio = 0;
  // f(lambda x)/f(x) at the largest grid x with lambda x still in range.
  double ratio_at_top = 0;
};

struct ClassifyOptions {
  std::vector<double> lambdas{0.5, 2.0, 10.0};
  int points_per_decade = 40;
  // O-regular variation proxy: sup/inf of f(lambda x)/f(x) over the grid.
  double variation_factor = 10.0;
  // Trend tolerance for the top-decade tests (bounded f', divergent f).
  double trend_tolerance = 0.01;
};

struct Classification {
  bool positive = false;
  bool monotone = false;
  bool derivative_positive = false;
  bool derivative_monotone = false;
  bool derivative_bounded = false;
  bool divergent = false;
  bool o_regular = false;
  bool derivative_o_regular = false;
  bool is_type1 = false;
  bool is_type2 = false;
  std::vector<VariationBound> variation;             // f
  std::vector<VariationBound> derivative_variation;  // f'
};

// Numeric type-1 / type-2 verdicts for f on [lo, hi], sampled on a log grid.
// Boundedness of f' and divergence of f are read off the top decade.
Classification classify(const GrowthFn& f, double lo, double hi,
                        const ClassifyOptions& options = {});

}  // namespace addbasis
