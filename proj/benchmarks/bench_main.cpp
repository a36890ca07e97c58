#include <benchmark/benchmark.h>

#include "wordorder/distributions.hpp"
#include "wordorder/infotheory.hpp"
#include "wordorder/random.hpp"
#include "wordorder/rate.hpp"
#include "wordorder/ring.hpp"

using namespace wordorder;

namespace {

MarkovChain sticky_chain() {
  return make_chain({{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}},
                    {{0.85, 0.05, 0.05, 0.05},
                     {0.05, 0.85, 0.05, 0.05},
                     {0.05, 0.05, 0.85, 0.05},
                     {0.05, 0.05, 0.05, 0.85}});
}

TokenSequence corpus(std::size_t n) { return generate(SequenceSource::markov(sticky_chain()), n, 7); }

void BM_NGramCounts(benchmark::State& state) {
  const auto text = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ngram_counts(text, 6));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NGramCounts)->Arg(10'000)->Arg(100'000);

void BM_RateProfile(benchmark::State& state) {
  const auto table = ngram_counts(corpus(100'000), 8);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_entropy_profile(table));
}
BENCHMARK(BM_RateProfile);

void BM_UncertaintyProfile(benchmark::State& state) {
  const auto model = make_markov(sticky_chain(), static_cast<std::size_t>(state.range(0)));
  const auto target = model.roles().back();
  const auto order = default_context_order(model, target);
  for (auto _ : state) benchmark::DoNotOptimize(uncertainty_profile(model, target, order));
}
BENCHMARK(BM_UncertaintyProfile)->DenseRange(3, 7, 2);

void BM_Evolve(benchmark::State& state) {
  RingKernel kernel;
  kernel.filters[Filter::dlm] = 2.0;
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve(kernel, WordOrder::SOV, 10, 100'000, 1, workers));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_Evolve)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
