#include "addbasis/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "addbasis/asymptotics.hpp"
#include "addbasis/error.hpp"
#include "addbasis/goldbach.hpp"
#include "addbasis/parallel.hpp"
#include "addbasis/randmodel.hpp"
#include "addbasis/repr.hpp"
#include "addbasis/sequences.hpp"
#include "addbasis/version.hpp"

namespace addbasis::cli {

namespace fs = std::filesystem;

void write_plot_file(const fs::path& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << '#';
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ' ';
      out << (r < columns[i].size() ? format_double(columns[i][r]) : "nan");
    }
    out << '\n';
  }
}

std::vector<std::string> emit_plotdata(const VerificationReport& report, const fs::path& dir,
                                       const std::string& stem) {
  std::vector<std::string> written;
  for (const auto& column : report.columns) {
    const std::string name = stem + "_" + column.name + ".dat";
    write_plot_file(dir / name, {"x", column.name}, {report.grid, column.values});
    written.push_back(name);
  }
  return written;
}

namespace {

// Collects artifacts for one run.
class Context {
 public:
  Context(const ExperimentConfig& config, const RunOptions& options)
      : config_(config), dir_(config.output), threads_(options.threads) {}

  const ExperimentConfig& config() const { return config_; }
  const fs::path& dir() const { return dir_; }
  unsigned threads() const { return threads_; }
  std::vector<std::string>& artifacts() { return artifacts_; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + (dir_ / name).string());
    body(out);
    if (!out) throw ResourceError("write to " + (dir_ / name).string() + " failed");
    artifacts_.push_back(name);
  }

  void json(const std::string& name, const nlohmann::json& value) {
    write(name, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
  }

  void plot(const std::string& name, const std::vector<std::string>& names,
            const std::vector<std::vector<double>>& columns) {
    write_plot_file(dir_ / name, names, columns);
    artifacts_.push_back(name);
  }

  // report.json, report.csv and per-column plot files.
  void report(const VerificationReport& r) {
    json("report.json", to_json(r));
    write("report.csv", [&](std::ostream& out) { write_csv(out, r); });
    for (auto& name : emit_plotdata(r, dir_, "report")) artifacts_.push_back(name);
  }

  BuildOptions build() const {
    BuildOptions b;
    b.method = parse_method(config_.method);
    b.max_primes = config_.primes;
    b.threads = threads_;
    return b;
  }

  std::uint64_t horizon() const { return config_.horizon ? config_.horizon : config_.xmax; }
  std::vector<std::uint64_t> grid() const {
    return log_grid(config_.xmin, config_.xmax, config_.per_decade);
  }

  Sequence sequence() const {
    const std::string& spec = config_.sequence;
    if (spec.starts_with("file:")) {
      std::ifstream in(spec.substr(5));
      if (!in) throw InputError("cannot open sequence file '" + spec.substr(5) + "'");
      Sequence a = read_sequence(in);
      if (a.horizon() < horizon()) throw RangeError("sequence file horizon below the experiment horizon");
      return a;
    }
    return generate(SequenceKind::parse(spec), horizon());
  }

 private:
  const ExperimentConfig& config_;
  fs::path dir_;
  unsigned threads_;
  std::vector<std::string> artifacts_;
};

struct Outcome {
  bool passed = true;
  std::string message;
};

Outcome verdict(const VerificationReport& r) {
  Outcome o;
  o.passed = r.passed;
  o.message = r.claim + " " + (r.passed ? "passed" : "FAILED") + " for " + r.subject;
  if (r.witness) o.message += "; witness x = " + format_double(*r.witness);
  return o;
}

Outcome run_repr_table(Context& ctx) {
  const auto& c = ctx.config();
  const Sequence a = ctx.sequence();
  const ReprTable table = build_table(a, c.d, ctx.horizon(), ctx.build());
  ctx.write("table.csv", [&](std::ostream& out) { write_table_csv(out, table); });
  std::vector<double> xs;
  std::vector<double> sd;
  for (const auto x : ctx.grid()) {
    xs.push_back(static_cast<double>(x));
    sd.push_back(to_double(table.s(x)));
  }
  ctx.plot("s_d.dat", {"x", "s_d"}, {xs, sd});
  return {true, "table r_" + std::to_string(c.d) + " of " + a.label() + " up to " +
                    std::to_string(table.horizon()) + " written"};
}

Outcome run_verify(Context& ctx) {
  const auto& c = ctx.config();
  const Sequence a = ctx.sequence();
  const auto xs = ctx.grid();
  VerificationReport report;
  if (c.mode == "sandwich") {
    report = sandwich_check(a, c.d, xs, ctx.build());
  } else if (c.mode == "ordering") {
    report = ordering_check(a, c.d, xs, {c.factor, ctx.build()});
  } else if (c.mode == "shift") {
    report = shift_stability(a, c.d, c.exponent, xs, {c.tolerance, ctx.build()});
  } else if (c.mode == "integral") {
    IntegralOptions o;
    o.quad_step = c.quad_step;
    o.bound = c.bound;
    o.build = ctx.build();
    report = integral_formula_check(a, GrowthFn::parse(c.f), GrowthFn::parse(c.eps), c.d, xs, o);
  } else if (c.mode == "second-moment") {
    report = second_moment_ratio(a, c.d, xs, {c.factor, ctx.build()});
  } else if (c.mode == "recursion") {
    report = recursion_check(a, c.d, c.l, xs, ctx.build());
  } else if (c.mode == "exponent") {
    const double estimate = exponent_estimate(a, xs);
    report.claim = "exponent";
    report.subject = a.label();
    report.proxy = "least-squares slope of log s(x) on log x over the top half of the grid > 0";
    for (const auto x : xs) report.grid.push_back(static_cast<double>(x));
    auto& s = report.add_column("s");
    for (const auto x : xs) s.push_back(static_cast<double>(a.count_upto(x)));
    report.passed = estimate > 0;
    report.note = "estimate=" + format_double(estimate);
    if (!report.passed) report.witness = report.grid.back();
  } else {  // distinct
    report.claim = "distinct";
    report.subject = a.label() + " d=" + std::to_string(c.d);
    report.proxy = "exact: r_d/d! <= r_d^* <= r_d";
    auto& ordered = report.add_column("r_d");
    auto& multisets = report.add_column("r_d_star");
    report.passed = true;
    for (const auto x : xs) {
      const auto b = distinct_representation_bounds(a, c.d, x, c.budget);
      report.grid.push_back(static_cast<double>(x));
      ordered.push_back(to_double(b.ordered));
      multisets.push_back(to_double(b.multisets));
      if (!b.sandwich_holds && report.passed) {
        report.passed = false;
        report.witness = static_cast<double>(x);
      }
    }
  }
  ctx.report(report);
  auto o = verdict(report);
  if (!report.note.empty()) o.message += " (" + report.note + ")";
  return o;
}

Outcome run_constants(Context& ctx) {
  const auto& c = ctx.config();
  const GrowthFn f = GrowthFn::parse(c.f);
  std::vector<double> xs;
  for (const auto x : ctx.grid()) xs.push_back(static_cast<double>(x));
  const auto estimates = constant_estimate(f, c.m, xs);
  std::vector<double> ratio;
  std::vector<double> density;
  for (const auto& e : estimates) {
    ratio.push_back(e.ratio);
    density.push_back(e.density_ratio);
  }
  ctx.write("constants.csv", [&](std::ostream& out) {
    write_csv_rows(out, {"x", "ratio", "density_ratio"}, {xs, ratio, density});
  });
  const std::string m = std::to_string(c.m);
  ctx.plot("c_f_" + m + ".dat", {"x", "c_f_" + m}, {xs, ratio});
  ctx.plot("density_" + m + ".dat", {"x", "density_" + m}, {xs, density});
  return {true, "c_{f," + m + "}(" + format_double(xs.back()) + ") = " +
                    format_double(ratio.back()) + ", density form " +
                    format_double(density.back())};
}

std::vector<std::uint64_t> default_probes(std::uint64_t hi) {
  const double lo = std::max(1.0, static_cast<double>(hi) / 100);
  std::vector<std::uint64_t> out;
  for (int i = 0; i < 20; ++i) {
    const auto n = static_cast<std::uint64_t>(
        std::llround(lo * std::pow(static_cast<double>(hi) / lo, i / 19.0)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

AlphaSpec alpha_spec(const ExperimentConfig& c) {
  return AlphaSpec::parse(c.f, c.gain == 0 ? 1.0 : c.gain);
}

SampleRunConfig sample_config(const Context& ctx) {
  SampleRunConfig run;
  run.master_seed = ctx.config().seed;
  run.trials = ctx.config().trials;
  run.horizon = ctx.horizon();
  run.threads = ctx.threads();
  return run;
}

Outcome run_sample(Context& ctx) {
  const auto& c = ctx.config();
  const AlphaSpec spec = alpha_spec(c);
  if (c.mode == "draw") {
    const Sequence omega = sample_sequence(spec, ctx.horizon(), c.seed);
    ctx.write("sequence.txt", [&](std::ostream& out) { write_sequence(out, omega); });
    nlohmann::json summary;
    summary["spec"] = spec.to_string();
    summary["seed"] = c.seed;
    summary["horizon"] = ctx.horizon();
    summary["size"] = omega.size();
    summary["expected_size"] = exact_expectation_s(spec, ctx.horizon());
    ctx.json("summary.json", summary);
    return {true, "sampled " + std::to_string(omega.size()) + " members up to " +
                      std::to_string(ctx.horizon())};
  }
  if (c.mode == "propagation") {
    const GrowthFn* f = spec.growth();
    if (!f) throw PreconditionError("propagation check needs a growth function spec");
    const Sequence omega = sample_sequence(spec, ctx.horizon(), c.seed);
    PropagationOptions o;
    o.factor = c.band_factor;
    o.build = ctx.build();
    const auto report = regularity_propagation_check(omega, *f, c.d, c.d_max, o);
    ctx.report(report);
    return verdict(report);
  }

  const auto probes = c.probes.empty() ? default_probes(c.xmax) : c.probes;
  const auto run = mc_expectation_rd(spec, c.d, probes, sample_config(ctx));
  std::vector<double> n, d, mean, var, se, lo, hi, normalized, exact;
  Outcome o;
  double band_lo = std::numeric_limits<double>::infinity();
  double band_hi = 0;
  std::size_t outside = 0;
  for (const auto& p : run.probes) {
    n.push_back(static_cast<double>(p.n));
    d.push_back(run.d);
    mean.push_back(p.mean);
    var.push_back(p.variance);
    se.push_back(p.std_error);
    lo.push_back(p.min);
    hi.push_back(p.max);
    normalized.push_back(p.normalized);
    exact.push_back(p.exact);
    if (run.d == 2 && std::abs(p.mean - p.exact) > 3 * p.std_error) ++outside;
    band_lo = std::min(band_lo, p.normalized);
    band_hi = std::max(band_hi, p.normalized);
  }
  ctx.write("stats.csv", [&](std::ostream& out) {
    write_csv_rows(out, {"n", "d", "mean", "variance", "std_error", "min", "max", "normalized", "exact"},
                   {n, d, mean, var, se, lo, hi, normalized, exact});
  });
  ctx.write("trials.csv", [&](std::ostream& out) {
    out << "trial,seed\n";
    for (std::size_t t = 0; t < run.trial_seeds.size(); ++t) out << t << ',' << run.trial_seeds[t] << '\n';
  });
  ctx.plot("mean.dat", {"n", "mean", "std_error"}, {n, mean, se});
  ctx.plot("normalized.dat", {"n", "normalized"}, {n, normalized});
  if (run.d == 2) {
    o.passed = outside == 0;
    o.message = std::to_string(outside) + " of " + std::to_string(n.size()) +
                " probes outside 3 standard errors of the exact expectation";
  } else {
    const double band = band_hi / band_lo;
    o.passed = band <= c.band_factor;
    o.message = "normalized mean band sup/inf = " + format_double(band) + " (limit " +
                format_double(c.band_factor) + ")";
  }
  return o;
}

Outcome run_concentration(Context& ctx) {
  const auto& c = ctx.config();
  const GrowthFn f = GrowthFn::parse(c.f);
  const double gain = c.gain != 0 ? c.gain : default_gain(f, c.n_threshold, ctx.horizon());
  const AlphaSpec spec = AlphaSpec::derivative(f, gain);
  ConcentrationOptions o;
  o.epsilon = c.epsilon;
  o.n_threshold = c.n_threshold;
  const auto result = concentration_experiment(spec, sample_config(ctx), o);
  const auto& r = result.per_n;
  ctx.json("report.json", to_json(r));
  ctx.write("concentration.csv", [&](std::ostream& out) { write_csv(out, r); });
  ctx.write("trials.csv", [&](std::ostream& out) {
    out << "trial,seed,min_r2\n";
    for (std::size_t t = 0; t < result.min_r2.size(); ++t) {
      out << t << ',' << derive_seed(c.seed, t) << ',' << format_double(result.min_r2[t]) << '\n';
    }
  });
  ctx.plot("concentration.dat", {"n", "exceedance", "chernoff_ceiling"},
           {r.grid, *r.column("exceedance"), *r.column("chernoff_ceiling")});
  Outcome out = verdict(r);
  out.message += " (K = " + format_double(gain) + "; " + r.note + ")";
  return out;
}

Outcome run_goldbach(Context& ctx) {
  const auto& c = ctx.config();
  std::uint64_t need = 0;
  if (c.mode == "scan") need = 2 * c.limit;
  if (c.mode == "records" || c.mode == "verify") need = 2 * c.hi;
  if (c.mode == "c2") need = c.limit;
  const ArithTables tables(std::max<std::uint64_t>(need, 100));

  if (c.mode == "scan") {
    const auto scan = prop43_scan(c.limit, tables);
    nlohmann::json j;
    j["limit"] = c.limit;
    j["count"] = scan.satisfying.size();
    j["largest_n"] = scan.largest;
    j["largest_2n"] = 2 * scan.largest;
    j["conclusion_holds"] = scan.conclusion_holds;
    j["counterexample"] = scan.counterexample ? nlohmann::json(*scan.counterexample) : nlohmann::json(nullptr);
    ctx.json("scan.json", j);
    ctx.write("scan.csv", [&](std::ostream& out) {
      out << "n,N\n";
      for (const auto n : scan.satisfying) out << n << ',' << 2 * n << '\n';
    });
    return {scan.conclusion_holds,
            "largest n with pi(2n) - omega(2n) > phi(2n)/2 is " + std::to_string(scan.largest) +
                " (2n = " + std::to_string(2 * scan.largest) + ")"};
  }
  if (c.mode == "verify") {
    const auto v = verify_goldbach(c.lo, c.hi, tables, ctx.threads());
    nlohmann::json j;
    j["lo"] = c.lo;
    j["hi"] = c.hi;
    j["checked"] = v.checked;
    j["first_failure"] = v.first_failure ? nlohmann::json(*v.first_failure) : nlohmann::json(nullptr);
    ctx.json("verify.json", j);
    if (v.first_failure) return {false, "g(n) = 0 at n = " + std::to_string(*v.first_failure)};
    return {true, "g(n) > 0 for all " + std::to_string(v.checked) + " n in [" +
                      std::to_string(std::max<std::uint64_t>(c.lo, 2)) + ", " + std::to_string(c.hi) + "]"};
  }
  if (c.mode == "c2") {
    std::vector<double> limits;
    std::vector<double> values;
    for (std::uint64_t p = 10; p <= c.limit; p *= 10) {
      limits.push_back(static_cast<double>(p));
      values.push_back(static_cast<double>(c2_constant(p, tables)));
    }
    const long double value = c2_constant(c.limit, tables);
    const long double previous = c2_constant(std::max<std::uint64_t>(3, c.limit / 10), tables);
    nlohmann::json j;
    j["limit"] = c.limit;
    j["value"] = static_cast<double>(value);
    j["previous_decade"] = static_cast<double>(previous);
    j["delta"] = static_cast<double>(previous - value);
    ctx.json("c2.json", j);
    ctx.plot("c2.dat", {"prime_limit", "c2"}, {limits, values});
    return {true, "C2 partial product to " + std::to_string(c.limit) + " = " +
                      format_double(static_cast<double>(value))};
  }
  // records
  const double c2 = static_cast<double>(c2_constant(std::min<std::uint64_t>(tables.limit(), 1000000), tables));
  const auto records = goldbach_records(std::max<std::uint64_t>(c.lo, 2), c.hi, tables, c2, ctx.threads());
  ctx.write("records.csv", [&](std::ostream& out) { write_records_csv(out, records); });
  std::vector<double> N, ra, rb;
  double sa = 0, sb = 0;
  for (const auto& r : records) {
    N.push_back(2.0 * static_cast<double>(r.n));
    ra.push_back(static_cast<double>(r.r2) / r.predA);
    rb.push_back(static_cast<double>(r.r2) / r.predB);
    sa += ra.back();
    sb += rb.back();
  }
  ctx.plot("ratio_a.dat", {"N", "r2_over_predA"}, {N, ra});
  ctx.plot("ratio_b.dat", {"N", "r2_over_predB"}, {N, rb});
  nlohmann::json j;
  j["log_argument"] = "N = 2n";
  j["c2"] = c2;
  j["mean_r2_over_predA"] = sa / static_cast<double>(records.size());
  j["mean_r2_over_predB"] = sb / static_cast<double>(records.size());
  ctx.json("summary.json", j);
  return {true, "mean r2/predA = " + format_double(sa / static_cast<double>(records.size())) +
                    ", r2/predB = " + format_double(sb / static_cast<double>(records.size()))};
}

Outcome run_counterexample(Context& ctx) {
  const auto& c = ctx.config();
  if (c.depth > CounterexampleSpec::kMaxDepth) throw InputError("depth above the supported maximum");
  const CounterexampleSpec spec{c.depth};
  std::vector<double> xs;
  std::vector<double> counts;
  for (const auto x : ctx.grid()) {
    xs.push_back(static_cast<double>(x));
    counts.push_back(static_cast<double>(counterexample_count(spec, x)));
  }
  ctx.write("counts.csv", [&](std::ostream& out) { write_csv_rows(out, {"x", "s"}, {xs, counts}); });
  ctx.plot("counts.dat", {"x", "s"}, {xs, counts});

  std::vector<double> index, anchor, at, at_double, ratio;
  bool increasing = true;
  const unsigned blocks = std::min(c.depth, CounterexampleSpec::kMaxReachableBlock);
  for (unsigned k = 1; k <= blocks; ++k) {
    const std::uint64_t a = CounterexampleSpec::block_anchor(k);
    const double s1 = static_cast<double>(counterexample_count(spec, a));
    const double s2 = static_cast<double>(counterexample_count(spec, 2 * a));
    if (!ratio.empty() && !(s2 / s1 > ratio.back())) increasing = false;
    index.push_back(k);
    anchor.push_back(static_cast<double>(a));
    at.push_back(s1);
    at_double.push_back(s2);
    ratio.push_back(s2 / s1);
  }
  ctx.write("ratios.csv", [&](std::ostream& out) {
    write_csv_rows(out, {"n", "a_n", "s_a", "s_2a", "ratio"}, {index, anchor, at, at_double, ratio});
  });

  // Closed form against the materialised set.
  const std::uint64_t brute = std::min<std::uint64_t>(c.xmax, 100000);
  SequenceKind kind;
  kind.family = SequenceKind::Family::stoehr_counterexample;
  kind.parameter = c.depth;
  const Sequence a = generate(kind, std::max<std::uint64_t>(brute, 2));
  std::uint64_t mismatch = 0;
  for (std::uint64_t x = 0; x <= brute; ++x) {
    if (a.count_upto(x) != counterexample_count(spec, x)) {
      mismatch = x + 1;
      break;
    }
  }
  Outcome o;
  o.passed = increasing && mismatch == 0;
  o.message = "ratios s(2a_n)/s(a_n):";
  for (const double r : ratio) o.message += " " + format_double(r);
  o.message += increasing ? " (strictly increasing)" : " (NOT increasing)";
  o.message += mismatch ? "; closed form disagrees at x = " + std::to_string(mismatch - 1)
                        : "; closed form matches enumeration up to " + std::to_string(brute);
  return o;
}

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(config);
  } catch (const Error& e) {
    result.status = kExitInvalid;
    result.message = std::string(e.kind()) + " error: " + e.what();
    return result;
  }

  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) {
    result.status = kExitInvalid;
    result.message = "cannot create output directory '" + config.output + "': " + ec.message();
    return result;
  }

  Context ctx(config, options);
  try {
    Outcome o;
    if (config.kind == "repr-table") o = run_repr_table(ctx);
    else if (config.kind == "verify") o = run_verify(ctx);
    else if (config.kind == "constants") o = run_constants(ctx);
    else if (config.kind == "sample") o = run_sample(ctx);
    else if (config.kind == "concentration") o = run_concentration(ctx);
    else if (config.kind == "goldbach") o = run_goldbach(ctx);
    else o = run_counterexample(ctx);
    result.status = o.passed ? kExitPass : kExitFailed;
    result.message = o.message;
  } catch (const Error& e) {
    result.status = kExitInvalid;
    result.message = std::string(e.kind()) + " error: " + e.what();
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json manifest;
  manifest["config"] = to_json(config);
  manifest["version"] = version();
  manifest["wall_time_seconds"] = seconds;
  manifest["threads"] = resolve_threads(options.threads);
  manifest["status"] = result.status;
  manifest["message"] = result.message;
  manifest["artifacts"] = ctx.artifacts();
  try {
    ctx.json("manifest.json", manifest);
  } catch (const Error& e) {
    result.status = kExitInvalid;
    result.message = std::string(e.kind()) + " error: " + e.what();
  }
  result.artifacts = ctx.artifacts();
  return result;
}

}  // namespace addbasis::cli
