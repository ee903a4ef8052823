// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "crowdspan/corpus.hpp"
#include "crowdspan/kernel.hpp"
#include "crowdspan/synthetic.hpp"

using namespace crowdspan;

namespace {

const std::vector<Document>& corpus() {
  static const std::vector<Document> docs = make_synthetic_corpus({4000, 7});
  return docs;
}

const std::vector<kernel::ToyDocument>& toy_docs() {
  static const std::vector<kernel::ToyDocument> docs = [] {
    kernel::ToyDataConfig c;
    c.documents = 2000;
    c.n = 128;
    c.d = 32;
    return kernel::make_toy_dataset(c);
  }();
  return docs;
}

void BM_ExtractSerial(benchmark::State& state) {
  corpus();
  for (auto _ : state) benchmark::DoNotOptimize(extract_corpus_serial(corpus()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

void BM_ExtractParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  corpus();
  for (auto _ : state) benchmark::DoNotOptimize(extract_corpus(corpus(), default_heuristic_options(), threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

void BM_BatchGradientSerial(benchmark::State& state) {
  const auto params = kernel::init_params(32, 1, 0.1);
  toy_docs();
  for (auto _ : state) benchmark::DoNotOptimize(kernel::batch_gradient_serial(toy_docs(), params, 0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(toy_docs().size()));
}

void BM_BatchGradientParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const auto params = kernel::init_params(32, 1, 0.1);
  toy_docs();
  for (auto _ : state) benchmark::DoNotOptimize(kernel::batch_gradient(toy_docs(), params, 0.01, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(toy_docs().size()));
}

void thread_counts(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExtractParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchGradientSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchGradientParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
