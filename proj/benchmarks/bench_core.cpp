#include <benchmark/benchmark.h>

#include "hdbwdm/hdbwdm.hpp"

namespace {

using namespace hdbwdm;

DataMatrix gaussian(Eigen::Index n, Eigen::Index d, Seed seed) {
  Rng rng(seed);
  DataMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.normal();
  return x;
}

const LabeledDataset& reference_data() {
  static const LabeledDataset ds = [] {
    MixtureConfig cfg;
    cfg.seed = 1;
    return generate(cfg);
  }();
  return ds;
}

void BM_Medoid(benchmark::State& state) {
  const DataMatrix x = gaussian(state.range(0), 150, 1);
  for (auto _ : state) benchmark::DoNotOptimize(medoid(x).index);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Medoid)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNSquared);

void BM_SpatialMedian(benchmark::State& state) {
  const DataMatrix x = gaussian(state.range(0), 150, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spatial_median(x).point.data());
}
BENCHMARK(BM_SpatialMedian)->Arg(100)->Arg(400);

void BM_FitRandomProjection(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_random_projection(500, static_cast<std::size_t>(state.range(0)), 3).matrix.data());
}
BENCHMARK(BM_FitRandomProjection)->Arg(150)->Arg(400);

void BM_FitPca(benchmark::State& state) {
  const DataMatrix& x = reference_data().x;
  for (auto _ : state) benchmark::DoNotOptimize(fit_pca(x, static_cast<std::size_t>(state.range(0))).matrix.data());
}
BENCHMARK(BM_FitPca)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_TrimmedKmeans(benchmark::State& state) {
  const DataMatrix z = project(reference_data().x, fit_random_projection(500, 150, 4));
  ClusterOptions opts;
  opts.k = 5;
  opts.alpha = 0.1;
  opts.n_init = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trimmed_kmeans(z, opts).objective);
}
BENCHMARK(BM_TrimmedKmeans)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HdBwdm(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hd_bwdm(reference_data().x, cfg).bwdm);
}
BENCHMARK(BM_HdBwdm)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
