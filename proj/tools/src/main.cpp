// addbasis: batch front-end for the additive-basis workbench.

#include <cstdlib>
#include <deque>
#include <functional>
#include <iostream>
#include <optional>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif

#include "addbasis/cli/config.hpp"
#include "addbasis/cli/run.hpp"
#include "addbasis/error.hpp"
#include "addbasis/version.hpp"

namespace {

using addbasis::cli::ExperimentConfig;

// Flags land in `flags`; after parsing, only those actually given are copied
// over the config loaded from --config (or the defaults).
struct Overlay {
  ExperimentConfig flags;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;

  template <class T>
  void add(CLI::App* app, const std::string& name, T ExperimentConfig::*field,
           const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags.*field, help);
    setters.emplace_back(opt, [this, field](ExperimentConfig& c) { c.*field = flags.*field; });
  }

  void apply(ExperimentConfig& c) const {
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
  }
};

struct Subcommand {
  CLI::App* app;
  std::string kind;
  std::string mode;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representation functions, asymptotic checks, random bases and Goldbach counts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", addbasis::version());

  std::string config_path;
  unsigned threads = 0;
  Overlay overlay;
  std::deque<Subcommand> subs;  // positional modes bind into elements; must not move

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config; flags given here override it");
    sub->add_option("--threads", threads, "Worker threads (default: ADDBASIS_THREADS or all cores)");
    overlay.add(sub, "--seed", &ExperimentConfig::seed, "Master seed");
    overlay.add(sub, "--out", &ExperimentConfig::output, "Output directory");
    overlay.add(sub, "--xmin", &ExperimentConfig::xmin, "Smallest grid point");
    overlay.add(sub, "--xmax", &ExperimentConfig::xmax, "Largest grid point");
    overlay.add(sub, "--per-decade", &ExperimentConfig::per_decade, "Grid points per decade");
    overlay.add(sub, "--horizon", &ExperimentConfig::horizon, "Truncation horizon (default: xmax)");
  };
  auto sequence_flags = [&](CLI::App* sub) {
    overlay.add(sub, "--seq", &ExperimentConfig::sequence,
                "naturals | primes | evens | squares | cubes | kth_powers(k) | powers_of_two | "
                "stoehr_counterexample(depth) | file:PATH");
    overlay.add(sub, "--d", &ExperimentConfig::d, "Order d");
    overlay.add(sub, "--method", &ExperimentConfig::method, "fast | direct");
    overlay.add(sub, "--primes", &ExperimentConfig::primes, "CRT primes allowed (1-3)");
  };
  auto add_sub = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    subs.push_back({sub, name, ""});
    return sub;
  };

  CLI::App* run_cmd = add_sub("run", "Run the experiment described by --config");
  run_cmd->get_option("--config")->required();

  CLI::App* table = add_sub("repr-table", "Exact table of r_d and s_d");
  sequence_flags(table);

  CLI::App* verify = add_sub("verify", "Numerical check of one asymptotic statement");
  verify->add_option("claim", subs.back().mode,
                     "sandwich | ordering | shift | integral | exponent | second-moment | "
                     "recursion | distinct");
  sequence_flags(verify);
  overlay.add(verify, "--l", &ExperimentConfig::l, "Split order l for the recursion identities");
  overlay.add(verify, "--exponent", &ExperimentConfig::exponent, "Shift exponent in (0,1)");
  overlay.add(verify, "--tolerance", &ExperimentConfig::tolerance, "Shift tolerance");
  overlay.add(verify, "--factor", &ExperimentConfig::factor, "Trend factor");
  overlay.add(verify, "--bound", &ExperimentConfig::bound, "Integral residual bound");
  overlay.add(verify, "--quad-step", &ExperimentConfig::quad_step, "Trapezoid step in (0,1]");
  overlay.add(verify, "--f", &ExperimentConfig::f, "Growth function c*x^a*log(x)^b");
  overlay.add(verify, "--eps", &ExperimentConfig::eps, "Error-term growth function");
  overlay.add(verify, "--budget", &ExperimentConfig::budget, "Enumeration budget");

  CLI::App* constants = add_sub("constants", "Estimate the limit constants c_{f,m}");
  overlay.add(constants, "--f", &ExperimentConfig::f, "Growth function");
  overlay.add(constants, "--m", &ExperimentConfig::m, "Power m");

  CLI::App* sample = add_sub("sample", "Random-sequence model: mc | draw | propagation");
  sample->add_option("mode", subs.back().mode, "mc | draw | propagation");
  overlay.add(sample, "--f", &ExperimentConfig::f, "Growth function, const:P[:N0] or invlog[:N0]");
  overlay.add(sample, "--gain", &ExperimentConfig::gain, "Gain K >= 1 (0: 1)");
  overlay.add(sample, "--d", &ExperimentConfig::d, "Order d (propagation: h)");
  overlay.add(sample, "--d-max", &ExperimentConfig::d_max, "Largest order for propagation");
  overlay.add(sample, "--trials", &ExperimentConfig::trials, "Monte Carlo trials");
  overlay.add(sample, "--probes", &ExperimentConfig::probes, "Probe points n");
  overlay.add(sample, "--band-factor", &ExperimentConfig::band_factor, "Largest sup/inf band");
  overlay.add(sample, "--method", &ExperimentConfig::method, "fast | direct");
  overlay.add(sample, "--primes", &ExperimentConfig::primes, "CRT primes allowed (1-3)");

  CLI::App* conc = add_sub("concentration", "Chernoff concentration of r_2 on sampled sequences");
  overlay.add(conc, "--f", &ExperimentConfig::f, "Type-2 growth function");
  overlay.add(conc, "--gain", &ExperimentConfig::gain, "Gain K (0: ceil(3/c1))");
  overlay.add(conc, "--trials", &ExperimentConfig::trials, "Trials");
  overlay.add(conc, "--epsilon", &ExperimentConfig::epsilon, "Relative deviation epsilon");
  overlay.add(conc, "--n-threshold", &ExperimentConfig::n_threshold, "Smallest n tested");

  CLI::App* goldbach = add_sub("goldbach", "Goldbach counts: scan | records | verify | c2");
  goldbach->add_option("mode", subs.back().mode, "scan | records | verify | c2");
  overlay.add(goldbach, "--limit", &ExperimentConfig::limit, "Scan limit / C2 prime limit");
  overlay.add(goldbach, "--lo", &ExperimentConfig::lo, "First n");
  overlay.add(goldbach, "--hi", &ExperimentConfig::hi, "Last n");

  CLI::App* counter = add_sub("counterexample", "Closed-form counting function of the counterexample set");
  overlay.add(counter, "--depth", &ExperimentConfig::depth, "Number of blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return addbasis::cli::kExitInvalid;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = addbasis::cli::load_config(config_path);
  } catch (const addbasis::Error& e) {
    std::cerr << "addbasis: " << e.kind() << " error: " << e.what() << '\n';
    return addbasis::cli::kExitInvalid;
  }
  for (const auto& s : subs) {
    if (!s.app->parsed() || s.kind == "run") continue;
    if (config.kind != s.kind) config.mode.clear();
    config.kind = s.kind;
    if (!s.mode.empty()) config.mode = s.mode;
  }
  overlay.apply(config);

  const auto result = addbasis::cli::run(config, {threads});
  if (result.status == addbasis::cli::kExitInvalid) {
    std::cerr << "addbasis: " << result.message << '\n';
  } else {
    std::cout << (result.status == addbasis::cli::kExitPass ? "PASS " : "FAIL ") << result.message
              << '\n';
  }
  return result.status;
}
