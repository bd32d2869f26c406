#include <benchmark/benchmark.h>

#include <cmath>

#include "mobdual/conformal.hpp"
#include "mobdual/density.hpp"
#include "mobdual/duality.hpp"
#include "mobdual/systems.hpp"

using namespace mobdual;

namespace {

Rational r(long p, long q = 1) { return Rational(mpz_class(p), mpz_class(q)); }

void BM_OrbitGauss(benchmark::State& state) {
  const MoebiusSystem s = canonical_example("rcf", {2, state.range(0)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(orbit_histogram(s, std::sqrt(2.0) - 1.0, 1000000, 20));
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_OrbitGauss)->Arg(100)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_KuzminGauss(benchmark::State& state) {
  const MoebiusSystem s = canonical_example("rcf", {2, state.range(0)});
  const DensityModel h = DensityModel::interval_union(s.space(), {Interval(0, 1)});
  for (auto _ : state) benchmark::DoNotOptimize(kuzmin_residual(s, h, 1001));
}
BENCHMARK(BM_KuzminGauss)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_KuzminSeries(benchmark::State& state) {
  const MoebiusSystem s = canonical_example("section3");
  const DensityModel h = series_density(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kuzmin_residual(s, h, 1001, {0.05L, 0.95L}));
}
BENCHMARK(BM_KuzminSeries)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ConstructDual(benchmark::State& state) {
  const MoebiusSystem s = build_standard_system(SystemType::parse("1,1,1"), {r(1, 2), r(4, 15), r(2)});
  const BranchOrder order = BranchOrder::parse("lnm");
  for (auto _ : state) benchmark::DoNotOptimize(construct_dual(s, order));
}
BENCHMARK(BM_ConstructDual)->Unit(benchmark::kMicrosecond);

void BM_PsiSolve(benchmark::State& state) {
  const MoebiusSystem s = build_standard_system(SystemType::parse("1,-1,1"), {r(1, 2), r(1), r(2)});
  for (auto _ : state) benchmark::DoNotOptimize(psi_solve(s));
}
BENCHMARK(BM_PsiSolve)->Unit(benchmark::kMicrosecond);

void BM_ConformalDepth(benchmark::State& state) {
  const UnionSystem d = section3_dual(Section3Variant::Transposed, 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(conformal_sum_check(d, r(2, 5), static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_ConformalDepth)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
