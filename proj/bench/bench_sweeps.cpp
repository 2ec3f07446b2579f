#include <benchmark/benchmark.h>

#include "zlab/verify.hpp"

using namespace zlab;

namespace {

const FreeProduct& line_fp() {
  static const FreeProduct fp(make_model("int-line"), make_model("int-line"));
  return fp;
}

const DirectProduct& null_product() {
  static const DirectProduct dp = product_for_null(make_model("int-line"), make_model("int-line"), {}, {});
  return dp;
}

// Argument: jobs (1 = serial reference path, 0 = OpenMP default).
void BM_MetricAxioms(benchmark::State& state) {
  const auto space = free_product_space(line_fp(), 8);
  const SweepOptions opt{42, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(check_metric_axioms(space, 10000, 1e-9, opt));
}
BENCHMARK(BM_MetricAxioms)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Coverage(benchmark::State& state) {
  const SweepOptions opt{42, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(check_total_boundedness(line_fp(), 0.25, 6, 20000, opt));
}
BENCHMARK(BM_Coverage)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_HomotopyK(benchmark::State& state) {
  const ZEpsilonIndex idx = line_fp().build_z_epsilon(0.5, 8);
  const SweepOptions opt{42, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(check_homotopy_K(line_fp(), idx, 6, 1000, 50, opt));
}
BENCHMARK(BM_HomotopyK)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_NullProduct(benchmark::State& state) {
  const DirectProduct& dp = null_product();
  const SweepOptions opt{42, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(check_null_product(dp, {}, opt));
}
BENCHMARK(BM_NullProduct)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
