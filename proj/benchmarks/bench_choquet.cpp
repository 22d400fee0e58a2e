#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cptlab/choquet.hpp"
#include "cptlab/kernel.hpp"

using namespace cptlab;

namespace {

Law random_atoms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = 1.0 / static_cast<double>(n);
    atoms.push_back({3.0 * z(rng), p, p});
  }
  return Law::discrete(std::move(atoms));
}

void BM_AtomValue(benchmark::State& state) {
  const auto law = random_atoms(static_cast<std::size_t>(state.range(0)), 1);
  const auto spec = CptSpec(0.88, 0.88, 0.61, 0.69, Form::TverskyKahneman);
  for (auto _ : state) benchmark::DoNotOptimize(cpt_value(law, spec).value());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AtomValue)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity();

void BM_ContinuousKernelLaw(benchmark::State& state) {
  const auto law = kernel_law(KernelModel::from_variance(0.16), Measure::P,
                              static_cast<int>(state.range(0)));
  const auto spec = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_plus(law, spec).value());
}
BENCHMARK(BM_ContinuousKernelLaw)->Arg(201)->Arg(2001);

void BM_ParetoTail(benchmark::State& state) {
  const auto law = Law::quantile_grid({{0.0, 0.0}, {0.5, 1.0}}, PowerTail{0.5, 2.5});
  const auto spec = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_plus(law, spec).value());
}
BENCHMARK(BM_ParetoTail);

void BM_TruncationLevel(benchmark::State& state) {
  const auto law = kernel_law(KernelModel::from_variance(0.16), Measure::Q);
  for (auto _ : state) benchmark::DoNotOptimize(truncation_level(law, 0.7, Measure::Q));
}
BENCHMARK(BM_TruncationLevel);

}  // namespace
