#include <benchmark/benchmark.h>

#include <random>

#include "tqkd/channels.hpp"
#include "tqkd/keyrate.hpp"
#include "tqkd/tomography.hpp"

using namespace tqkd;

static void BM_MubConstruction(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mub_family(d));
}
BENCHMARK(BM_MubConstruction)->Arg(2)->Arg(3)->Arg(5)->Arg(7);

static void BM_PredictTable(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const DensityMatrix rho = kraus_to_joint_state(random_kraus_channel(d, d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(predict_probabilities(rho));
}
BENCHMARK(BM_PredictTable)->Arg(2)->Arg(3)->Arg(5);

// The first iteration pays for the cached decomposition; later ones measure the solve.
static void BM_TomographySolve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const JointProbabilityTable table = predict_probabilities(random_kraus_channel(d, d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(process_to_joint_state(solve_process_matrix(table)));
}
BENCHMARK(BM_TomographySolve)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_QstRate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const DensityMatrix rho = kraus_to_joint_state(random_kraus_channel(d, d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(qst_rate(rho));
}
BENCHMARK(BM_QstRate)->Arg(2)->Arg(3)->Arg(5);

static void BM_RfiRate(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const DensityMatrix rho = kraus_to_joint_state(random_kraus_channel(2, 3, rng));
  for (auto _ : state) benchmark::DoNotOptimize(rfi_rate(rho));
}
BENCHMARK(BM_RfiRate);

static void BM_DPlus1Rate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ErrorVectors q = error_vectors(predict_probabilities(depolarizing(d, 0.2)));
  for (auto _ : state) benchmark::DoNotOptimize(dplus1_rate(q));
}
BENCHMARK(BM_DPlus1Rate)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
