#include "cubica/cubic_space.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/linear.hpp"

#include <benchmark/benchmark.h>

using namespace cubica;

static void BM_Rref(benchmark::State& state) {
  const Field f(static_cast<int>(state.range(1)));
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = static_cast<Residue>(rng.uniform(f.p()));
  for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->Args({8, 2})->Args({32, 2})->Args({32, 3})->Args({64, 5});

static void BM_Pullback(benchmark::State& state) {
  const Field f(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  const CubicForm q = random_form(n, f, rng);
  Matrix g(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = static_cast<Residue>(rng.uniform(2));
  for (auto _ : state) benchmark::DoNotOptimize(pullback(q, g));
}
BENCHMARK(BM_Pullback)->Arg(4)->Arg(8)->Arg(16);

static void BM_EnumerateIsocZeroForm(benchmark::State& state) {
  const CubicSpace v(Field(2), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_isoc(v).size());
}
BENCHMARK(BM_EnumerateIsocZeroForm)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
  const Field f(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_forms(static_cast<std::size_t>(state.range(0)), f).orbits.size());
}
BENCHMARK(BM_Classify)->Args({2, 2})->Args({3, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);

static void BM_ExtensionTrial(benchmark::State& state) {
  const Field f(2);
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(extension_trial(f, static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_ExtensionTrial)->Arg(0)->Arg(2)->Arg(4);

static void BM_BuildUniversal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_d_universal(2, Field(2), 1).dim());
}
BENCHMARK(BM_BuildUniversal)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
