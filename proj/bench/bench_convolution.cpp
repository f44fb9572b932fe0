#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "coopfront/convolution.hpp"
#include "coopfront/kernels.hpp"

using namespace coop;

namespace {

// args: grid length, laplace shape x100 (5 hits the r_max cap, 100 is the default kernel)
void run(benchmark::State& state, ConvolutionMethod method) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SampledKernel k = sample_kernel(KernelSpec::laplace(0.01 * static_cast<double>(state.range(1))), 0.05);
  Convolver c(k, method);
  std::vector<double> q(n), out(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = std::sin(0.01 * static_cast<double>(i)) + 1.0;
  for (auto _ : state) {
    c.apply(q, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
  state.counters["radius_nodes"] = static_cast<double>(k.radius_nodes);
}

void args(benchmark::internal::Benchmark* b) {
  for (long n : {1000, 4000, 16000})
    for (long w : {5, 100}) b->Args({n, w});
}

void BM_serial(benchmark::State& s) { run(s, ConvolutionMethod::serial); }
void BM_parallel(benchmark::State& s) { run(s, ConvolutionMethod::parallel); }
void BM_fft(benchmark::State& s) { run(s, ConvolutionMethod::fft); }
void BM_automatic(benchmark::State& s) { run(s, ConvolutionMethod::automatic); }

}  // namespace

BENCHMARK(BM_serial)->Apply(args);
BENCHMARK(BM_parallel)->Apply(args);
BENCHMARK(BM_fft)->Apply(args);
BENCHMARK(BM_automatic)->Apply(args);

BENCHMARK_MAIN();
