#include <benchmark/benchmark.h>

#include "svar/oracles.hpp"
#include "svar/symmetric_moments.hpp"

namespace {

using namespace svar;

FiniteJoint markov_chain(std::size_t n) {
  const std::vector<double> states{0.0, 1.0};
  const std::vector<std::vector<double>> transition{{0.9, 0.1}, {0.2, 0.8}};
  const std::vector<double> initial{2.0 / 3.0, 1.0 / 3.0};
  return markov_to_finite_joint(states, transition, initial, n);
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_GaussianGroup4(benchmark::State& state) {
  const ProcessModel model = gaussian_ar1(0.5, 1.0);
  MomentOptions options;
  options.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_tables(model, 20, 4, options));
}

void BM_GaussianGroup4Enumeration(benchmark::State& state) {
  const ProcessModel model = gaussian_ar1(0.5, 1.0);
  MomentOptions options;
  options.execution = mode(state);
  options.path = MomentPath::enumeration;
  for (auto _ : state) benchmark::DoNotOptimize(build_tables(model, 16, 4, options));
}

void BM_MarkovGroup4(benchmark::State& state) {
  const ProcessModel model = markov_chain(12);
  MomentOptions options;
  options.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_tables(model, 12, 4, options));
}

void BM_ExactLaw(benchmark::State& state) {
  const auto model = markov_chain(16);
  for (auto _ : state) benchmark::DoNotOptimize(exact_law(model, mode(state)));
}

void BM_MonteCarlo(benchmark::State& state) {
  const Ar1Spec spec{0.5, 1.0, 20};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ar1(spec, 200'000, 1, 50, mode(state)));
}

}  // namespace

// argument 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_GaussianGroup4)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianGroup4Enumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarkovGroup4)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactLaw)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
