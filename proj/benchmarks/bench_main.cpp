#include <benchmark/benchmark.h>

#include "argrel/baseline_model.hpp"
#include "argrel/eval_harness.hpp"
#include "argrel/pair_compiler.hpp"
#include "argrel/rng.hpp"

#ifdef ARGREL_BENCH_SYNTHETIC
#include "synthetic_corpus.hpp"
#endif

namespace {

using namespace argrel;

void BM_FeaturizePair(benchmark::State& state) {
  const std::string p1 = "we have to invest in public schools because they are falling behind";
  const std::string p2 = "frankly the next president should reform school funding in ohio";
  for (auto _ : state) benchmark::DoNotOptimize(baseline::featurize_pair(p1, p2));
}
BENCHMARK(BM_FeaturizePair);

void BM_MacroF1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto labels = standard_labels();
  CounterRng rng(1);
  std::vector<RelationLabel> g(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = labels[rng.below(4)];
    p[i] = labels[rng.below(4)];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::macro_f1(eval::confusion(g, p, labels)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_MacroF1)->Arg(2479)->Arg(100000);

void BM_SampleNegatives(benchmark::State& state) {
  std::vector<compiler::NegativePool> pools;
  for (int m = 0; m < 120; ++m) {
    compiler::NegativePool pool{"m" + std::to_string(m), "c", {}};
    for (int i = 0; i < 40; ++i) pool.texts.push_back("map " + std::to_string(m) + " text " + std::to_string(i));
    pools.push_back(std::move(pool));
  }
  const auto scope = state.range(0) ? NegativeScope::WithinCorpus : NegativeScope::WithinMap;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compiler::sample_negative_pairs(pools, 8055, 42, scope));
  }
}
BENCHMARK(BM_SampleNegatives)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

#ifdef ARGREL_BENCH_SYNTHETIC
void BM_CompileCorpus(benchmark::State& state) {
  const auto snap = testing::generate_snapshot(testing::us2016_profile());
  CompileConfig cfg;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compiler::compile_corpus(snap, cfg));
}
BENCHMARK(BM_CompileCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();
