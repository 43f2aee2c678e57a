#include "addbasis/repr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "addbasis/error.hpp"
#include "addbasis/ntt.hpp"
#include "addbasis/parallel.hpp"

namespace addbasis {

ReprMethod parse_method(const std::string& text) {
  if (text == "direct") return ReprMethod::direct;
  if (text == "fast") return ReprMethod::fast;
  throw InputError("unknown method '" + text + "' (expected direct or fast)");
}

std::string to_string(ReprMethod method) {
  return method == ReprMethod::direct ? "direct" : "fast";
}

ReprTable::ReprTable(unsigned d, std::vector<Count> counts, std::string label, ReprMethod method,
                     std::vector<std::uint64_t> primes)
    : d_(d),
      counts_(std::move(counts)),
      label_(std::move(label)),
      method_(method),
      primes_(std::move(primes)) {
  if (counts_.empty()) throw InputError("representation table needs at least one entry");
  prefix_.resize(counts_.size());
  Count running = 0;
  for (std::size_t n = 0; n < counts_.size(); ++n) {
    if (counts_[n] > kCountMax - running) throw CapacityError("s_d overflows 128 bits");
    running += counts_[n];
    prefix_[n] = running;
  }
}

Count ReprTable::r(std::uint64_t n) const {
  if (n > horizon()) {
    throw RangeError("r_d(" + std::to_string(n) + ") beyond table horizon " +
                     std::to_string(horizon()));
  }
  return counts_[n];
}

Count ReprTable::s(std::uint64_t x) const {
  if (x > horizon()) {
    throw RangeError("s_d(" + std::to_string(x) + ") beyond table horizon " +
                     std::to_string(horizon()));
  }
  return prefix_[x];
}

Count ReprTable::s_real(double x) const {
  if (!(x >= 0)) throw RangeError("s_d at negative x");
  if (x > static_cast<double>(horizon())) {
    throw RangeError("s_d(" + format_double(x) + ") beyond table horizon " +
                     std::to_string(horizon()));
  }
  return prefix_[static_cast<std::uint64_t>(std::floor(x))];
}

double ReprTable::mean_value(std::uint64_t n) const {
  if (n == 0) throw DomainError("mean value r~_d(0) is undefined");
  return to_double(s(n)) / static_cast<double>(n);
}

namespace {

Count r_direct_rec(std::span<const std::uint64_t> members, const Sequence& a, unsigned d,
                   std::uint64_t n) {
  if (d == 1) return a.contains(n) ? 1 : 0;
  Count total = 0;
  for (const std::uint64_t m : members) {
    if (m > n) break;
    total += r_direct_rec(members, a, d - 1, n - m);
  }
  return total;
}

void check_order(unsigned d) {
  if (d == 0) throw InputError("order d must be at least 1");
}

}  // namespace

Count r_direct(const Sequence& a, unsigned d, std::uint64_t n) {
  check_order(d);
  if (n > a.horizon()) {
    throw RangeError("n = " + std::to_string(n) + " beyond sequence horizon " +
                     std::to_string(a.horizon()));
  }
  return r_direct_rec(a.elements(), a, d, n);
}

namespace {

std::vector<Count> direct_counts(const Sequence& a, unsigned d, std::uint64_t horizon) {
  const auto indicator = a.indicator();
  std::vector<Count> current(horizon + 1, 0);
  for (std::uint64_t n = 0; n <= horizon; ++n) current[n] = indicator[n];
  std::vector<std::uint64_t> members;
  for (const std::uint64_t m : a.elements()) {
    if (m > horizon) break;
    members.push_back(m);
  }
  // r_j = r_{j-1} * r_1
  for (unsigned j = 2; j <= d; ++j) {
    std::vector<Count> next(horizon + 1, 0);
    for (const std::uint64_t m : members) {
      const Count* src = current.data();
      Count* dst = next.data() + m;
      const std::uint64_t len = horizon + 1 - m;
      for (std::uint64_t i = 0; i < len; ++i) dst[i] += src[i];
    }
    current.swap(next);
  }
  return current;
}

}  // namespace

ReprTable build_table(const Sequence& a, unsigned d, std::uint64_t horizon,
                      const BuildOptions& options) {
  check_order(d);
  if (horizon > a.horizon()) {
    throw RangeError("table horizon " + std::to_string(horizon) + " beyond sequence horizon " +
                     std::to_string(a.horizon()));
  }
  const std::uint64_t m = a.count_upto(horizon);
  // s_d(N) <= m^d and every coefficient of P^j (j <= d) is at most m^(d-1).
  if (!checked_pow(m, d)) {
    throw CapacityError("s_d could exceed 2^128 (|A ∩ [0,N]| = " + std::to_string(m) +
                        ", d = " + std::to_string(d) + ")");
  }
  if (options.method == ReprMethod::direct) {
    return ReprTable(d, direct_counts(a, d, horizon), a.label(), ReprMethod::direct, {});
  }

  if (options.max_primes < 1 || options.max_primes > kNttPrimes.size()) {
    throw InputError("max_primes must be between 1 and 3");
  }
  const Count coefficient_bound = *checked_pow(m, d - 1);
  unsigned needed = 0;
  Count product = 1;
  bool enough = false;
  for (const auto& p : kNttPrimes) {
    ++needed;
    const auto next = checked_mul(product, p.modulus);
    if (!next || *next > coefficient_bound) {
      enough = true;
      break;
    }
    product = *next;
  }
  if (!enough || needed > options.max_primes) {
    throw CapacityError("exact reconstruction needs " + std::to_string(needed) +
                        " CRT primes but only " + std::to_string(options.max_primes) +
                        " allowed; raise the prime count");
  }

  const auto indicator = a.indicator().first(horizon + 1);
  std::vector<std::vector<std::uint64_t>> residues(needed);
  parallel_for(needed, options.threads, [&](std::size_t i) {
    residues[i] = power_mod(indicator, d, horizon + 1, kNttPrimes[i]);
  });
  std::vector<std::uint64_t> primes;
  for (unsigned i = 0; i < needed; ++i) primes.push_back(kNttPrimes[i].modulus);
  return ReprTable(d, crt_combine(residues), a.label(), ReprMethod::fast, std::move(primes));
}

VerificationReport recursion_check(const Sequence& a, unsigned d, unsigned l,
                                   std::span<const std::uint64_t> sample_ns,
                                   const BuildOptions& options) {
  if (l < 1 || l >= d) throw InputError("recursion check needs 1 <= l < d");
  std::uint64_t top = 0;
  for (const auto n : sample_ns) top = std::max(top, n);
  const ReprTable full = build_table(a, d, top, options);
  const ReprTable left = build_table(a, d - l, top, options);
  const ReprTable right = build_table(a, l, top, options);

  VerificationReport report;
  report.claim = "recursion";
  report.subject = a.label() + " d=" + std::to_string(d) + " l=" + std::to_string(l);
  report.proxy = "exact identities at sampled n";
  report.tolerance = 0;
  for (const auto n : sample_ns) report.grid.push_back(static_cast<double>(n));
  auto& e1 = report.add_column("discrepancy_r");
  auto& e2 = report.add_column("discrepancy_s_rl");
  auto& e3 = report.add_column("discrepancy_s_sl");

  auto gap = [](Count x, Count y) { return to_double(x > y ? x - y : y - x); };
  report.passed = true;
  for (const auto n : sample_ns) {
    Count sum_r = 0;
    Count sum_rs = 0;
    Count sum_sr = 0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      sum_r += left.r(k) * right.r(n - k);
      sum_rs += left.r(k) * right.s(n - k);
      sum_sr += left.s(k) * right.r(n - k);
    }
    const double g1 = gap(full.r(n), sum_r);
    const double g2 = gap(full.s(n), sum_rs);
    const double g3 = gap(full.s(n), sum_sr);
    e1.push_back(g1);
    e2.push_back(g2);
    e3.push_back(g3);
    if ((g1 != 0 || g2 != 0 || g3 != 0) && report.passed) {
      report.passed = false;
      report.witness = static_cast<double>(n);
    }
  }
  return report;
}

namespace {

// Nondecreasing tuples of members summing to `remaining`, smallest part >= members[from].
Count count_multisets(std::span<const std::uint64_t> members, std::size_t from, unsigned parts,
                      std::uint64_t remaining, const Sequence& a) {
  if (parts == 1) {
    return a.contains(remaining) && remaining >= members[from] ? 1 : 0;
  }
  Count total = 0;
  for (std::size_t i = from; i < members.size(); ++i) {
    const std::uint64_t m = members[i];
    // every remaining part is >= m
    if (m > remaining / parts) break;
    total += count_multisets(members, i, parts - 1, remaining - m, a);
  }
  return total;
}

}  // namespace

DistinctBounds distinct_representation_bounds(const Sequence& a, unsigned d, std::uint64_t n,
                                              double budget) {
  check_order(d);
  if (n > a.horizon()) {
    throw RangeError("n = " + std::to_string(n) + " beyond sequence horizon " +
                     std::to_string(a.horizon()));
  }
  const double m = static_cast<double>(a.count_upto(n));
  const double work = static_cast<double>(n) * std::pow(m, static_cast<double>(d - 1));
  if (work > budget) {
    throw ResourceError("multiset enumeration needs about " + format_double(work) +
                        " steps, budget is " + format_double(budget));
  }
  DistinctBounds out;
  out.ordered = r_direct(a, d, n);
  const auto members = a.elements();
  std::size_t count = 0;
  while (count < members.size() && members[count] <= n) ++count;
  out.multisets = count == 0 ? 0 : count_multisets(members.first(count), 0, d, n, a);
  Count factorial = 1;
  for (unsigned i = 2; i <= d; ++i) factorial *= i;
  // r/d! <= r* without leaving the integers
  out.sandwich_holds = out.ordered <= out.multisets * factorial && out.multisets <= out.ordered;
  return out;
}

void write_table_csv(std::ostream& out, const ReprTable& table) {
  out << "# label=" << table.label() << " d=" << table.order()
      << " method=" << to_string(table.method()) << " primes=";
  for (std::size_t i = 0; i < table.primes().size(); ++i) {
    out << (i ? ";" : "") << table.primes()[i];
  }
  out << '\n' << "n,r_d,s_d\n";
  for (std::uint64_t n = 0; n <= table.horizon(); ++n) {
    out << n << ',' << to_string(table.r(n)) << ',' << to_string(table.s(n)) << '\n';
  }
}

}  // namespace addbasis
