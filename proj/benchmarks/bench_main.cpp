#include <benchmark/benchmark.h>

#include "addbasis/addbasis.hpp"

using namespace addbasis;

namespace {

Sequence named(const char* text, std::uint64_t horizon) {
  return generate(SequenceKind::parse(text), horizon);
}

void BM_PowerMod(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = named("primes", n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(power_mod(a.indicator(), 3, n + 1, kNttPrimes[0]));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PowerMod)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->Complexity(benchmark::oNLogN);

void BM_TableFast(benchmark::State& state) {
  const auto d = static_cast<unsigned>(state.range(0));
  const auto a = named("primes", 1 << 18);
  BuildOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_table(a, d, 1 << 18, options));
}
BENCHMARK(BM_TableFast)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_TableDirectVsFast(benchmark::State& state) {
  const auto a = named("squares", 1 << 16);
  BuildOptions options;
  options.method = state.range(0) == 0 ? ReprMethod::direct : ReprMethod::fast;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_table(a, 3, 1 << 16, options));
  state.SetLabel(to_string(options.method));
}
BENCHMARK(BM_TableDirectVsFast)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ArithTables(limit));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->Arg(1 << 20)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

void BM_GoldbachVerify(benchmark::State& state) {
  const ArithTables tables(2000000);
  for (auto _ : state) benchmark::DoNotOptimize(verify_goldbach(2, 1000000, tables, 1));
}
BENCHMARK(BM_GoldbachVerify)->Unit(benchmark::kMillisecond);

void BM_SampleSequence(benchmark::State& state) {
  const auto spec = AlphaSpec::derivative(GrowthFn::parse("x^(1/2)*log(x)^(1/2)"), 4);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_sequence(spec, 100000, ++seed));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleSequence)->Unit(benchmark::kMillisecond);

void BM_ExpectationTable(benchmark::State& state) {
  const auto spec = AlphaSpec::derivative(GrowthFn::parse("x/log(x)"));
  for (auto _ : state) benchmark::DoNotOptimize(expectation_table(spec, 100000));
}
BENCHMARK(BM_ExpectationTable)->Unit(benchmark::kMillisecond);

void BM_Concentration(benchmark::State& state) {
  const auto spec = AlphaSpec::derivative(GrowthFn::parse("x^(1/2)*log(x)^(1/2)"), 4);
  SampleRunConfig run;
  run.trials = 10;
  run.horizon = 50000;
  run.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(concentration_experiment(spec, run));
}
BENCHMARK(BM_Concentration)->Unit(benchmark::kMillisecond);

void BM_HypergeomSample(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(hypergeom_sample(10000, 5000, 1000, rng));
}
BENCHMARK(BM_HypergeomSample);

}  // namespace
BENCHMARK_MAIN();
