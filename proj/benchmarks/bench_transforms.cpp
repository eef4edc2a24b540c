// Benchmarks for the hot paths: the integral transform (direct double sum
// vs. coordinate-factored), cyclotomic ring arithmetic, the truncated
// matrix exp/log pair, and the full matrix-space vanishing verification.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "cuspforms/cusp.hpp"
#include "cuspforms/gln.hpp"
#include "cuspforms/lattice.hpp"
#include "cuspforms/rng.hpp"

using namespace cuspforms;

namespace {

SchwartzFunction random_function(std::int64_t p, int n, int a, int b,
                                 int entries, std::uint64_t seed) {
  SchwartzFunction f{LatticeWindow(p, n, full_coords(n), a, b)};
  DetRng rng(seed);
  while (f.support_size() < entries) {
    Cyclotomic v = Cyclotomic::root_of_unity(p, 2, rng.below(pow_i64(p, 2)))
                       .rescaled_p(static_cast<int>(rng.below(3)) - 1);
    std::int64_t key = static_cast<std::int64_t>(
        rng.below(static_cast<std::uint64_t>(f.window().point_count())));
    f.set(key, v);
  }
  return f;
}

void BM_transform_direct(benchmark::State& state) {
  SchwartzFunction f = random_function(3, static_cast<int>(state.range(0)), 0,
                                       1, 16, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_transform(f));
}
BENCHMARK(BM_transform_direct)->Arg(2)->Arg(3);

void BM_transform_separable(benchmark::State& state) {
  SchwartzFunction f = random_function(3, static_cast<int>(state.range(0)), 0,
                                       1, 16, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_separable(f));
}
BENCHMARK(BM_transform_separable)->Arg(2)->Arg(3);

void BM_transform_separable_depth2(benchmark::State& state) {
  SchwartzFunction f = random_function(3, 2, -1, 1, 16, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_separable(f));
}
BENCHMARK(BM_transform_separable_depth2);

void BM_cyclotomic_multiply(benchmark::State& state) {
  int level = static_cast<int>(state.range(0));
  Cyclotomic a = Cyclotomic::root_of_unity(3, level, 4) +
                 Cyclotomic::integer(3, 12).rescaled_p(-2);
  Cyclotomic b = Cyclotomic::root_of_unity(3, level, 7) +
                 Cyclotomic::integer(3, -5);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_cyclotomic_multiply)->Arg(1)->Arg(2)->Arg(4);

void BM_matrix_exp(benchmark::State& state) {
  DetRng rng(11);
  ScaledMatrix x(3, 2, 0, 12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      x.set(i, j, 3 * static_cast<std::int64_t>(rng.below(pow_i64(3, 11))));
  for (auto _ : state) benchmark::DoNotOptimize(exp_truncated(x));
}
BENCHMARK(BM_matrix_exp);

void BM_matrix_log(benchmark::State& state) {
  DetRng rng(11);
  ScaledMatrix x(3, 2, 0, 12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      x.set(i, j, 3 * static_cast<std::int64_t>(rng.below(pow_i64(3, 11))));
  ScaledMatrix g = exp_truncated(x);
  for (auto _ : state) benchmark::DoNotOptimize(log_truncated(g));
}
BENCHMARK(BM_matrix_log);

void BM_lie_cusp_verify(benchmark::State& state) {
  std::int64_t p = state.range(0);
  SchwartzFunction phihat = fourier_separable(elliptic_bump(
      companion_elliptic(ResiduePolynomial(
          p, 1, p == 3 ? std::vector<std::int64_t>{1, 0, 1}
                       : std::vector<std::int64_t>{2, 0, 1})),
      1));
  std::vector<ParabolicData> parabolics = standard_parabolics(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(lie_cusp_verify(phihat, parabolics, 1, 10));
}
BENCHMARK(BM_lie_cusp_verify)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
