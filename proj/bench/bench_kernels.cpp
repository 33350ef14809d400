// Serial references against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "redrep/nonmixing.hpp"
#include "redrep/whitehead.hpp"

using namespace redrep;

namespace {

const std::vector<ConjClass>& f3_classes() {
  static const auto classes = enumerate_primitive_classes(3, 9);
  return classes;
}

const TwistedPair& twisted() {
  static const TwistedPair t = [] {
    const auto p = build_fuchsian_4punctured();
    return twisted_pair(p, 2, default_g1(3), default_g2(3));
  }();
  return t;
}

void BM_EnumerateSerial(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_primitive_classes_serial(3, L));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_primitive_classes(3, L));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(basic_lemma_sweep_serial(f3_classes()));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f3_classes().size()));
}

void BM_SweepParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(basic_lemma_sweep(f3_classes()));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f3_classes().size()));
}

void BM_SweepFused(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(basic_lemma_sweep(3, 9));
}

void BM_PS2Serial(benchmark::State& state) {
  const auto classes = enumerate_primitive_classes(3, static_cast<int>(state.range(0)));
  PS2Options o;
  o.max_length = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ps2_probe_serial(twisted().rho1, twisted().rho2, o, classes));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * classes.size()));
}

void BM_PS2Parallel(benchmark::State& state) {
  const auto classes = enumerate_primitive_classes(3, static_cast<int>(state.range(0)));
  PS2Options o;
  o.max_length = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ps2_probe_classes(twisted().rho1, twisted().rho2, o, classes));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * classes.size()));
}

}  // namespace

BENCHMARK(BM_EnumerateSerial)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepFused)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PS2Serial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PS2Parallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
