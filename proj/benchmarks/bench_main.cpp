#include <benchmark/benchmark.h>

#include <vector>

#include "latentscope/attribution.hpp"
#include "latentscope/features.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/latent_model.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/ncde.hpp"
#include "latentscope/rng.hpp"
#include "latentscope/spline.hpp"
#include "latentscope/synth.hpp"

using namespace latentscope;

namespace {

std::vector<double> point(int d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> x(d);
  for (double& v : x) v = rng.uniform(-1.5, 1.5);
  return x;
}

void BM_MlpForward(benchmark::State& state) {
  const MlpSpec net = make_random_tanh_mlp({136, 64, 8}, 1);
  const auto x = point(136, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mlp_forward(net, x));
}
BENCHMARK(BM_MlpForward);

void BM_MlpJacobian(benchmark::State& state) {
  const MlpSpec net = make_random_tanh_mlp({136, 64, 8}, 1);
  const auto x = point(136, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mlp_jacobian(net, x));
}
BENCHMARK(BM_MlpJacobian);

// cost is linear in the node count
void BM_IntegratedJacobian(benchmark::State& state) {
  const MlpSpec net = make_random_tanh_mlp({20, 16, 4}, 1);
  const auto x = point(20, 2);
  const auto x_hat = point(20, 3);
  const int n_quad = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrated_jacobian(net, x, x_hat, n_quad));
}
BENCHMARK(BM_IntegratedJacobian)->Arg(8)->Arg(64)->Arg(256);

void BM_SolveCde(benchmark::State& state) {
  VectorField field;
  field.latent_dim = 3;
  field.input_dim = 4;
  field.mlp = make_random_tanh_mlp({4, 16, 12}, 1, 0.5);
  const std::vector<double> times = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  Matrix values(8, 4);
  SplitMix64 rng(2);
  for (double& v : values.data) v = rng.uniform(0.0, 2.0);
  const ControlPath path = fit_natural_cubic(times, values);
  const std::vector<double> z0(3, 0.0);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_cde(field, path, z0, steps));
}
BENCHMARK(BM_SolveCde)->Arg(4)->Arg(16)->Arg(64);

// the full contrastive pipeline on a small block scenario
void BM_HeatmapPair(benchmark::State& state) {
  Dataset data = make_dataset(60, 4, 6, 3);
  Dataset aug = augment(data);
  const FeatureStats stats = fit_minmax(aug);
  apply_minmax_shift(aug, stats);
  const BlockModelSpec block = make_block_model(
      24, 2, expand_subsets({{0, 1, 2}, {3, 4, 5}}, 6), 4, 1.5);
  const MlpLatentModel model(block.mlp, aug.step_count());

  const auto ids = balanced_subset(aug.labels(), 4, 5);
  Dataset pool;
  pool.times = aug.times;
  pool.feature_names = aug.feature_names;
  std::vector<TimeSeriesSample> baselines;
  size_t next = 0;
  for (int i = 0; i < aug.sample_count(); ++i) {
    if (next < ids.size() && ids[next] == i) {
      baselines.push_back(aug.samples[i]);
      ++next;
    } else {
      pool.samples.push_back(aug.samples[i]);
    }
  }
  SelectionParams params;
  params.m = 16;
  params.k = 3;
  params.l = 3;
  params.n_quad = 16;
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_heatmap_pair(pool, model, baselines, params, 7));
}
BENCHMARK(BM_HeatmapPair);

}  // namespace

BENCHMARK_MAIN();
