#include <benchmark/benchmark.h>

#include "iqgal/classify.hpp"
#include "iqgal/localtest.hpp"
#include "iqgal/quadform.hpp"

using namespace iqgal;

static void BM_Compose(benchmark::State& state) {
  const i64 d = -state.range(0);
  const auto forms = reduced_forms(d);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose(forms[i % forms.size()], forms[(i * 7 + 3) % forms.size()]));
    ++i;
  }
}
BENCHMARK(BM_Compose)->Arg(3299)->Arg(3321607);

static void BM_ClassGroup(benchmark::State& state) {
  const auto fd = FundamentalDiscriminant::validate(-state.range(0));
  const auto backend = static_cast<ClassGroupBackend>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(class_group(fd, backend));
}
BENCHMARK(BM_ClassGroup)
    ->Args({3299, 0})
    ->Args({3299, 1})
    ->Args({3321607, 0})
    ->Args({3321607, 1})
    ->Unit(benchmark::kMicrosecond);

static void BM_Classify(benchmark::State& state) {
  const i64 d = -state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(classify(d, {.short_circuit = false}));
}
BENCHMARK(BM_Classify)->Arg(107)->Arg(9403)->Arg(3321607)->Unit(benchmark::kMicrosecond);

static void BM_PhiImage(benchmark::State& state) {
  const i64 p = state.range(1);
  const LocalContext ctx = build_context(FundamentalDiscriminant::validate(-state.range(0)), p);
  i64 u = 1;
  for (auto _ : state) {
    u = u % 1000 + 1;
    const QuadraticInteger a{2 * u, 2, ctx.disc};
    if (a.norm() % p == 0) continue;
    benchmark::DoNotOptimize(phi_image(ctx, a));
  }
}
BENCHMARK(BM_PhiImage)->Args({107, 3})->Args({9403, 11})->Args({2411, 23});

static void BM_GenericEngine(benchmark::State& state) {
  const LocalContext ctx = build_context(FundamentalDiscriminant::validate(-state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(GenericEngine(ctx).index());
}
BENCHMARK(BM_GenericEngine)->Args({107, 3})->Args({347, 5})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
