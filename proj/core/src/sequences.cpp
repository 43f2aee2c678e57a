#include "addbasis/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "addbasis/count.hpp"
#include "addbasis/error.hpp"

namespace addbasis {

namespace {

constexpr std::uint64_t kMaxHorizon = std::numeric_limits<std::uint32_t>::max() - 1;

void check_horizon(std::uint64_t horizon) {
  if (horizon > kMaxHorizon) {
    throw InputError("horizon " + std::to_string(horizon) +
                     " exceeds the supported maximum " + std::to_string(kMaxHorizon));
  }
}

std::vector<std::uint8_t> prime_indicator(std::uint64_t horizon) {
  std::vector<std::uint8_t> is_prime(horizon + 1, 1);
  is_prime[0] = 0;
  if (horizon >= 1) is_prime[1] = 0;
  for (std::uint64_t i = 2; i * i <= horizon; ++i) {
    if (!is_prime[i]) continue;
    for (std::uint64_t j = i * i; j <= horizon; j += i) is_prime[j] = 0;
  }
  return is_prime;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InputError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

// "name(arg)" -> arg, or nullopt-like empty view when no parentheses.
bool split_call(std::string_view text, std::string_view& name, std::string_view& arg) {
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    name = text;
    arg = {};
    return false;
  }
  if (text.back() != ')') throw InputError("unbalanced parentheses in '" + std::string(text) + "'");
  name = text.substr(0, open);
  arg = text.substr(open + 1, text.size() - open - 2);
  return true;
}

}  // namespace

Sequence Sequence::from_elements(std::span<const std::uint64_t> elements,
                                 std::uint64_t horizon, std::string label) {
  check_horizon(horizon);
  std::vector<std::uint8_t> indicator(horizon + 1, 0);
  for (const auto e : elements) {
    if (e > horizon) {
      throw InputError("element " + std::to_string(e) + " exceeds horizon " +
                       std::to_string(horizon));
    }
    indicator[e] = 1;
  }
  return from_indicator(std::move(indicator), std::move(label));
}

Sequence Sequence::from_indicator(std::vector<std::uint8_t> indicator, std::string label) {
  if (indicator.empty()) throw InputError("indicator must cover at least [0, 0]");
  check_horizon(indicator.size() - 1);
  Sequence s;
  s.horizon_ = indicator.size() - 1;
  s.indicator_ = std::move(indicator);
  s.label_ = std::move(label);
  s.build_caches();
  return s;
}

void Sequence::build_caches() {
  prefix_.resize(indicator_.size());
  elements_.clear();
  std::uint32_t running = 0;
  for (std::uint64_t n = 0; n < indicator_.size(); ++n) {
    if (indicator_[n]) {
      indicator_[n] = 1;
      ++running;
      elements_.push_back(n);
    }
    prefix_[n] = running;
  }
}

bool Sequence::contains(std::uint64_t n) const {
  if (n > horizon_) {
    throw RangeError("membership of " + std::to_string(n) + " beyond horizon " +
                     std::to_string(horizon_));
  }
  return indicator_[n] != 0;
}

std::uint64_t Sequence::count_upto(std::uint64_t x) const {
  if (x > horizon_) {
    throw RangeError("s(" + std::to_string(x) + ") requested from a truncation with horizon " +
                     std::to_string(horizon_));
  }
  return prefix_[x];
}

std::uint64_t Sequence::count_upto_real(double x) const {
  if (!(x >= 0.0)) throw RangeError("s(x) needs x >= 0");
  if (x > static_cast<double>(horizon_)) {
    throw RangeError("s(x) requested beyond horizon " + std::to_string(horizon_));
  }
  return prefix_[static_cast<std::uint64_t>(std::floor(x))];
}

Sequence Sequence::truncated(std::uint64_t horizon) const {
  if (horizon > horizon_) throw RangeError("cannot extend a truncation");
  std::vector<std::uint8_t> bits(indicator_.begin(), indicator_.begin() + horizon + 1);
  return from_indicator(std::move(bits), label_);
}

SequenceKind SequenceKind::parse(std::string_view text) {
  std::string_view name;
  std::string_view arg;
  const bool has_arg = split_call(text, name, arg);
  SequenceKind kind;
  if (name == "naturals" && !has_arg) {
    kind.family = Family::naturals;
  } else if (name == "primes" && !has_arg) {
    kind.family = Family::primes;
  } else if (name == "evens" && !has_arg) {
    kind.family = Family::evens;
  } else if (name == "powers_of_two" && !has_arg) {
    kind.family = Family::powers_of_two;
  } else if (name == "squares" && !has_arg) {
    kind = {Family::kth_powers, 2};
  } else if (name == "cubes" && !has_arg) {
    kind = {Family::kth_powers, 3};
  } else if (name == "kth_powers" && has_arg) {
    kind = {Family::kth_powers, static_cast<unsigned>(parse_unsigned(arg, "power"))};
    if (kind.parameter < 1 || kind.parameter > 63) throw InputError("power must be in [1, 63]");
  } else if (name == "stoehr" || name == "stoehr_counterexample") {
    kind.family = Family::stoehr_counterexample;
    kind.parameter = has_arg ? static_cast<unsigned>(parse_unsigned(arg, "depth"))
                             : CounterexampleSpec{}.depth;
    if (kind.parameter > CounterexampleSpec::kMaxDepth) {
      throw InputError("counterexample depth must be <= " +
                       std::to_string(CounterexampleSpec::kMaxDepth));
    }
  } else {
    throw InputError("unknown sequence kind '" + std::string(text) + "'");
  }
  return kind;
}

std::string SequenceKind::name() const {
  switch (family) {
    case Family::naturals: return "naturals";
    case Family::primes: return "primes";
    case Family::evens: return "evens";
    case Family::powers_of_two: return "powers_of_two";
    case Family::kth_powers:
      if (parameter == 2) return "squares";
      if (parameter == 3) return "cubes";
      return "kth_powers(" + std::to_string(parameter) + ")";
    case Family::stoehr_counterexample:
      return "stoehr_counterexample(" + std::to_string(parameter) + ")";
  }
  return "unknown";
}

Sequence generate(const SequenceKind& kind, std::uint64_t horizon) {
  if (horizon < 2) throw InputError("generate needs horizon >= 2");
  check_horizon(horizon);
  std::vector<std::uint8_t> bits;
  switch (kind.family) {
    case SequenceKind::Family::naturals:
      bits.assign(horizon + 1, 1);
      break;
    case SequenceKind::Family::primes:
      bits = prime_indicator(horizon);
      break;
    case SequenceKind::Family::evens:
      bits.assign(horizon + 1, 0);
      for (std::uint64_t n = 0; n <= horizon; n += 2) bits[n] = 1;
      break;
    case SequenceKind::Family::powers_of_two:
      bits.assign(horizon + 1, 0);
      for (std::uint64_t p = 1; p <= horizon; p *= 2) bits[p] = 1;
      break;
    case SequenceKind::Family::kth_powers: {
      if (kind.parameter < 1) throw InputError("kth_powers needs k >= 1");
      bits.assign(horizon + 1, 0);
      for (std::uint64_t b = 0;; ++b) {
        auto power = checked_pow(b, kind.parameter);
        if (!power || *power > horizon) break;
        bits[static_cast<std::uint64_t>(*power)] = 1;
      }
      break;
    }
    case SequenceKind::Family::stoehr_counterexample: {
      bits.assign(horizon + 1, 0);
      for (std::uint64_t b = 0;; ++b) {
        const Count cube = Count{b} * b * b;
        if (cube > horizon) break;
        bits[static_cast<std::uint64_t>(cube)] = 1;
      }
      const unsigned last = std::min(kind.parameter, CounterexampleSpec::kMaxReachableBlock);
      for (unsigned k = 1; k <= last; ++k) {
        const std::uint64_t anchor = CounterexampleSpec::block_anchor(k);
        if (anchor > horizon) break;
        const std::uint64_t end =
            std::min<std::uint64_t>(horizon, anchor + CounterexampleSpec::block_length(k));
        for (std::uint64_t n = anchor; n <= end; ++n) bits[n] = 1;
      }
      break;
    }
  }
  return Sequence::from_indicator(std::move(bits), kind.name());
}

std::uint64_t CounterexampleSpec::block_base(unsigned k) {
  if (k > 5) throw InputError("block base 2^(2^k) overflows 64 bits for k > 5");
  return std::uint64_t{1} << (1u << k);
}

std::uint64_t CounterexampleSpec::block_anchor(unsigned k) {
  if (k > kMaxReachableBlock) throw InputError("block anchor overflows 64 bits for k > 4");
  const std::uint64_t b = block_base(k);
  return b * b * b;
}

std::uint64_t CounterexampleSpec::block_length(unsigned k) {
  if (k > kMaxReachableBlock) throw InputError("block length overflows for k > 4");
  const std::uint64_t b = block_base(k);
  return b * b;
}

std::uint64_t integer_cube_root(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(x)));
  auto cube = [](std::uint64_t v) { return Count{v} * v * v; };
  while (r > 0 && cube(r) > x) --r;
  while (cube(r + 1) <= x) ++r;
  return r;
}

std::uint64_t counterexample_count(const CounterexampleSpec& spec, std::uint64_t x) {
  // Cubes 0..floor(x^(1/3)), plus for every block that has started the run
  // elements beyond its anchor (the anchor itself is a cube).
  std::uint64_t total = integer_cube_root(x) + 1;
  const unsigned last = std::min(spec.depth, CounterexampleSpec::kMaxReachableBlock);
  for (unsigned k = 1; k <= last; ++k) {
    const std::uint64_t anchor = CounterexampleSpec::block_anchor(k);
    if (anchor > x) break;
    total += std::min(CounterexampleSpec::block_length(k), x - anchor);
  }
  return total;
}

std::uint64_t min_pairwise_gcd(const Sequence& a, std::uint64_t cap) {
  const auto all = a.elements();
  const auto end = std::upper_bound(all.begin(), all.end(), cap);
  const std::span<const std::uint64_t> members(all.begin(), end);
  if (members.size() < 2) {
    throw InputError("min_pairwise_gcd needs at least two members <= cap");
  }
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      best = std::min(best, std::gcd(members[i], members[j]));
      if (best == 1) return 1;
    }
  }
  return best;
}

void write_sequence(std::ostream& out, const Sequence& a) {
  out << "# horizon=" << a.horizon() << " label=" << a.label() << '\n';
  for (const auto e : a.elements()) out << e << '\n';
}

Sequence read_sequence(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# horizon=", 0) != 0) {
    throw InputError("sequence file must start with '# horizon=N label=...'");
  }
  std::string_view rest(line);
  rest.remove_prefix(std::string_view("# horizon=").size());
  const auto space = rest.find(' ');
  const std::uint64_t horizon = parse_unsigned(rest.substr(0, space), "horizon");
  std::string label;
  if (space != std::string_view::npos) {
    auto tail = rest.substr(space + 1);
    if (tail.rfind("label=", 0) == 0) label = std::string(tail.substr(6));
  }
  std::vector<std::uint64_t> members;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::uint64_t value = parse_unsigned(line, "member on line " + std::to_string(line_no));
    if (!members.empty() && value <= members.back()) {
      throw InputError("members must be strictly increasing (line " + std::to_string(line_no) + ")");
    }
    members.push_back(value);
  }
  return Sequence::from_elements(members, horizon, std::move(label));
}

}  // namespace addbasis
