#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "dtigra/operators.hpp"
#include "dtigra/tikhonov.hpp"

using namespace dtigra;

namespace {

CoefVec sample_coefs(std::size_t n) {
  CoefVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(0.37 * static_cast<double>(i) + 0.1);
  return x;
}

Signal sample_signal(std::size_t n) {
  return Signal::sample(n, [](double t) { return std::cos(3.0 * t) - t; });
}

void BM_AutoconvolutionApply(benchmark::State& state) {
  const unsigned levels = static_cast<unsigned>(state.range(0));
  const ComposedForward fwd(levels);
  const CoefVec x = sample_coefs(fwd.domain_size());
  for (auto _ : state) benchmark::DoNotOptimize(fwd.apply(x));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(fwd.domain_size()));
}
BENCHMARK(BM_AutoconvolutionApply)->DenseRange(6, 11)->Complexity();

void BM_AdjointDerivative(benchmark::State& state) {
  const unsigned levels = static_cast<unsigned>(state.range(0));
  const ComposedForward fwd(levels);
  const CoefVec x = sample_coefs(fwd.domain_size());
  const Signal w = sample_signal(fwd.range_size());
  for (auto _ : state) benchmark::DoNotOptimize(fwd.adjoint_derivative(x, w));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(fwd.domain_size()));
}
BENCHMARK(BM_AdjointDerivative)->DenseRange(6, 11)->Complexity();

void BM_HaarSynthesis(benchmark::State& state) {
  const HaarSynthesis haar(static_cast<unsigned>(state.range(0)));
  const CoefVec x = sample_coefs(haar.size());
  for (auto _ : state) benchmark::DoNotOptimize(haar.synthesize(x));
}
BENCHMARK(BM_HaarSynthesis)->DenseRange(6, 11);

void BM_TikhonovEvaluate(benchmark::State& state) {
  auto fwd = std::make_shared<ComposedForward>(9);
  const CoefVec x = sample_coefs(fwd->domain_size());
  const Signal y = fwd->apply(sample_coefs(fwd->domain_size()));
  const ProblemInstance prob(fwd, y, 0.01, Exponent(1.2));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(prob, 0.1, x));
}
BENCHMARK(BM_TikhonovEvaluate);

}  // namespace

BENCHMARK_MAIN();
