#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "addbasis/rng.hpp"

namespace addbasis::cli {

// Everything that determines an experiment's output. Thread count is not part
// of it: results never depend on it.
struct ExperimentConfig {
  // repr-table | verify | constants | sample | concentration | goldbach | counterexample
  std::string kind = "verify";
  // verify: sandwich | ordering | shift | integral | exponent | second-moment |
  //         recursion | distinct
  // sample: mc | draw | propagation;  goldbach: scan | records | verify | c2
  std::string mode;

  std::string sequence = "primes";
  std::string f = "x^(1/2)*log(x)^(1/2)";
  std::string eps = "1";
  unsigned d = 2;
  unsigned l = 1;
  unsigned m = 2;
  unsigned d_max = 4;
  std::string method = "fast";
  unsigned primes = 3;

  // Grid: integers log-spaced over [xmin, xmax]; horizon 0 means xmax.
  std::uint64_t xmin = 10;
  std::uint64_t xmax = 10000;
  int per_decade = 10;
  std::uint64_t horizon = 0;

  double exponent = 0.5;    // shift: L = s(x)^(1 - exponent)
  double tolerance = 0.05;  // shift
  double factor = 2.0;      // ordering, second-moment trend; propagation band uses band_factor
  double band_factor = 5.0;
  double bound = 10.0;      // integral residual
  double quad_step = 1.0;
  double budget = 1e8;      // distinct

  std::uint64_t seed = kDefaultSeed;
  std::uint64_t trials = 100;
  double gain = 0;  // 0: derived from f
  std::vector<std::uint64_t> probes;  // empty: 20 log-spaced points in [xmax/100, xmax]
  double epsilon = 0.98;
  std::uint64_t n_threshold = 1000;

  std::uint64_t limit = 200000;  // goldbach scan / c2 prime limit
  std::uint64_t lo = 2;
  std::uint64_t hi = 10000;
  unsigned depth = 4;

  std::string output = "addbasis-out";

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& config);
// InputError on unknown fields or wrongly typed values; absent fields keep defaults.
ExperimentConfig config_from_json(const nlohmann::json& json);
ExperimentConfig load_config(const std::string& path);

// InputError naming the first inconsistency.
void validate(const ExperimentConfig& config);

}  // namespace addbasis::cli
