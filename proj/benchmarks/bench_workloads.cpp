#include <benchmark/benchmark.h>

#include <vector>

#include "cptlab/audit.hpp"
#include "cptlab/optimizer.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/regime.hpp"
#include "cptlab/witness.hpp"

using namespace cptlab;

namespace {

void BM_ClassifyGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify_grid(state.range(0)).size());
}
BENCHMARK(BM_ClassifyGrid)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_WitnessAtoms(benchmark::State& state) {
  std::vector<std::int64_t> idx;
  for (std::int64_t n = 1; n <= 1000; ++n) idx.push_back(n);
  const auto model = KernelModel::from_variance(0.16);
  for (auto _ : state)
    benchmark::DoNotOptimize(witness_alpha_ge_beta(CptSpec::power(0.9, 0.5, 1.0, 1.0), model, 1.0, idx).rows.size());
}
BENCHMARK(BM_WitnessAtoms)->Unit(benchmark::kMillisecond);

void BM_WitnessContinuous(benchmark::State& state) {
  const auto model = KernelModel::from_variance(0.16);
  const std::vector<std::int64_t> idx{1, 10, 100, 1000};
  const auto cause = static_cast<WitnessCause>(state.range(0));
  const auto spec = cause == WitnessCause::BetaDeltaBelowOne ? CptSpec::power(0.95, 0.96, 1.0, 1.0)
                                                             : CptSpec::power(0.9, 1.0, 0.2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(run_witness(cause, spec, model, 0.0, idx).rows.size());
}
BENCHMARK(BM_WitnessContinuous)
    ->Arg(static_cast<int>(WitnessCause::BetaDeltaBelowOne))
    ->Arg(static_cast<int>(WitnessCause::AlphaGammaAboveOne))
    ->Unit(benchmark::kMillisecond);

void BM_AuditCorpus(benchmark::State& state) {
  const auto lemma = static_cast<Lemma>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_audit_corpus(lemma, 100, 7).size());
}
BENCHMARK(BM_AuditCorpus)
    ->Arg(static_cast<int>(Lemma::EleqL))
    ->Arg(static_cast<int>(Lemma::Lemeta))
    ->Arg(static_cast<int>(Lemma::L1L2))
    ->Unit(benchmark::kMillisecond);

void BM_OptimizeContinuous(benchmark::State& state) {
  const auto model = KernelModel::from_variance(0.16);
  OptimizeOptions o;
  o.u_cells = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize(CptSpec::power(0.5, 0.8, 0.6, 0.7), model, 1.0, 500, 3, o).best_value);
}
BENCHMARK(BM_OptimizeContinuous)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_OptimizeQuantized(benchmark::State& state) {
  const auto model = KernelModel::from_variance(0.16);
  OptimizeOptions o;
  o.u_cells = 3;
  o.levels = {-2.0, -1.0, 0.0, 1.0, 2.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize(CptSpec::power(0.5, 0.8, 0.6, 0.7), model, 0.0, 1000, 3, o).best_value);
}
BENCHMARK(BM_OptimizeQuantized)->Unit(benchmark::kMillisecond);

}  // namespace
