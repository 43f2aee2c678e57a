#include "addbasis/cli/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "addbasis/error.hpp"

namespace addbasis::cli {

namespace {

// One table drives serialisation, parsing and the unknown-field check.
template <class Visitor>
void visit_fields(ExperimentConfig& c, Visitor&& v) {
  v("kind", c.kind);
  v("mode", c.mode);
  v("sequence", c.sequence);
  v("f", c.f);
  v("eps", c.eps);
  v("d", c.d);
  v("l", c.l);
  v("m", c.m);
  v("d_max", c.d_max);
  v("method", c.method);
  v("primes", c.primes);
  v("xmin", c.xmin);
  v("xmax", c.xmax);
  v("per_decade", c.per_decade);
  v("horizon", c.horizon);
  v("exponent", c.exponent);
  v("tolerance", c.tolerance);
  v("factor", c.factor);
  v("band_factor", c.band_factor);
  v("bound", c.bound);
  v("quad_step", c.quad_step);
  v("budget", c.budget);
  v("seed", c.seed);
  v("trials", c.trials);
  v("gain", c.gain);
  v("probes", c.probes);
  v("epsilon", c.epsilon);
  v("n_threshold", c.n_threshold);
  v("limit", c.limit);
  v("lo", c.lo);
  v("hi", c.hi);
  v("depth", c.depth);
  v("output", c.output);
}

template <class T>
void read_field(const nlohmann::json& value, const char* name, T& field) {
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!value.is_number_unsigned()) throw InputError("");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!value.is_number_integer()) throw InputError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw InputError("");
    }
    field = value.get<T>();
  } catch (const std::exception&) {
    throw InputError(std::string("config field '") + name + "' has the wrong type");
  }
}

const std::set<std::string>& kinds() {
  static const std::set<std::string> k{"repr-table", "verify",        "constants",     "sample",
                                       "concentration", "goldbach", "counterexample"};
  return k;
}

const std::set<std::string>& modes(const std::string& kind) {
  static const std::set<std::string> none;
  static const std::set<std::string> verify{"sandwich", "ordering",      "shift",     "integral",
                                            "exponent", "second-moment", "recursion", "distinct"};
  static const std::set<std::string> sample{"mc", "draw", "propagation"};
  static const std::set<std::string> goldbach{"scan", "records", "verify", "c2"};
  if (kind == "verify") return verify;
  if (kind == "sample") return sample;
  if (kind == "goldbach") return goldbach;
  return none;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json out = nlohmann::json::object();
  auto copy = config;
  visit_fields(copy, [&](const char* name, const auto& field) { out[name] = field; });
  return out;
}

ExperimentConfig config_from_json(const nlohmann::json& json) {
  if (!json.is_object()) throw InputError("config must be a JSON object");
  ExperimentConfig config;
  std::set<std::string> known;
  visit_fields(config, [&](const char* name, auto& field) {
    known.insert(name);
    if (const auto it = json.find(name); it != json.end()) read_field(*it, name, field);
  });
  for (const auto& [key, value] : json.items()) {
    if (!known.count(key)) throw InputError("unknown config field '" + key + "'");
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(json);
}

void validate(const ExperimentConfig& c) {
  if (!kinds().count(c.kind)) throw InputError("unknown experiment kind '" + c.kind + "'");
  const auto& allowed = modes(c.kind);
  if (!allowed.empty() && !allowed.count(c.mode)) {
    std::string list;
    for (const auto& m : allowed) list += (list.empty() ? "" : ", ") + m;
    throw InputError("experiment '" + c.kind + "' needs a mode, one of: " + list);
  }
  if (allowed.empty() && !c.mode.empty()) {
    throw InputError("experiment '" + c.kind + "' takes no mode");
  }
  if (c.d < 1) throw InputError("d must be at least 1");
  if (c.xmin < 1 || c.xmax < c.xmin) throw InputError("grid needs 1 <= xmin <= xmax");
  if (c.per_decade < 1) throw InputError("per_decade must be positive");
  if (c.horizon != 0 && c.horizon < c.xmax) throw InputError("horizon below xmax");
  if (c.primes < 1 || c.primes > 3) throw InputError("primes must be 1, 2 or 3");
  if (c.method != "fast" && c.method != "direct") throw InputError("method must be fast or direct");
  if (c.output.empty()) throw InputError("output directory must be named");
  if (c.kind == "sample" || c.kind == "concentration") {
    if (c.trials < 1) throw InputError("trials must be positive");
    if (c.gain != 0 && c.gain < 1) throw InputError("gain must be 0 (automatic) or >= 1");
  }
  if (c.kind == "goldbach" && c.lo > c.hi) throw InputError("goldbach range needs lo <= hi");
}

}  // namespace addbasis::cli
