#include <benchmark/benchmark.h>

#include <vector>

#include "siegelfc/gauss.hpp"
#include "siegelfc/jacobi.hpp"
#include "siegelfc/qseries.hpp"
#include "siegelfc/siegel.hpp"

using namespace siegelfc;

namespace {

// Coefficients of E4 and E6 scaled by 1/7: large numerators, common denominator.
std::vector<Rational> sample_series(int k, std::size_t len) {
  std::vector<Rational> v = eisenstein(k, len - 1).coeffs();
  for (Rational& c : v) c /= 7;
  return v;
}

std::vector<Rational> naive_convolve(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                     std::size_t len) {
  std::vector<Rational> c(len, Rational(0));
  for (std::size_t i = 0; i < len && i < a.size(); ++i)
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void BM_ExactConvolve(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto a = sample_series(4, len), b = sample_series(6, len);
  for (auto _ : state) benchmark::DoNotOptimize(exact_convolve(a, b, len));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactConvolve)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_NaiveConvolve(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto a = sample_series(4, len), b = sample_series(6, len);
  for (auto _ : state) benchmark::DoNotOptimize(naive_convolve(a, b, len));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NaiveConvolve)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_PhiCusp10(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(phi_cusp(10, state.range(0)));
}
BENCHMARK(BM_PhiCusp10)->Arg(2000)->Arg(8000)->Arg(24000)->Unit(benchmark::kMillisecond);

void BM_MaassLift(benchmark::State& state) {
  const JacobiTable phi = phi_cusp(10, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maass_lift(phi, state.range(0)));
}
BENCHMARK(BM_MaassLift)->Arg(2000)->Arg(8000)->Arg(24000)->Unit(benchmark::kMillisecond);

void BM_GaussSumBrute(benchmark::State& state) {
  const std::int64_t p = state.range(0);
  for (auto _ : state)
    for (std::int64_t beta = 0; beta < 2 * p; ++beta) benchmark::DoNotOptimize(gauss_sum_brute(p, 4, 1, beta));
}
BENCHMARK(BM_GaussSumBrute)->Arg(7)->Arg(101);

void BM_GaussSumClosed(benchmark::State& state) {
  const std::int64_t p = state.range(0);
  for (auto _ : state)
    for (std::int64_t beta = 0; beta < 2 * p; ++beta) benchmark::DoNotOptimize(gauss_sum_closed(p, 4, 1, beta));
}
BENCHMARK(BM_GaussSumClosed)->Arg(7)->Arg(101);

void BM_RhoProductBrute(benchmark::State& state) {
  const Complex kappa = extract_kappa(5).kappa;
  const std::int64_t a[] = {1}, b[] = {2};
  for (auto _ : state) benchmark::DoNotOptimize(rho_product_brute(5, 1, 4, 8, a, b, kappa));
}
BENCHMARK(BM_RhoProductBrute);

}  // namespace
BENCHMARK_MAIN();
