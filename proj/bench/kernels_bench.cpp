// Serial reference vs OpenMP kernels on fixture-sized inputs.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "innoscope/jdrc.hpp"
#include "innoscope/kernels.hpp"

namespace {

using innoscope::kernels::Exec;

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_Gram(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(state.range(1), 14, 1);
  for (auto _ : state) benchmark::DoNotOptimize(innoscope::kernels::gram(x, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_NearestCentroid(benchmark::State& state) {
  const Eigen::MatrixXd pts = random_matrix(state.range(1), 2, 2);
  const Eigen::MatrixXd cen = random_matrix(4, 2, 3);
  std::vector<int> labels(static_cast<std::size_t>(pts.rows()));
  std::vector<double> dist(labels.size());
  for (auto _ : state) {
    innoscope::kernels::nearest_centroid(pts, cen, labels, dist, exec_of(state));
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_ClusterMeans(benchmark::State& state) {
  const Eigen::MatrixXd pts = random_matrix(state.range(1), 14, 4);
  std::vector<int> labels(static_cast<std::size_t>(pts.rows()));
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 4);
  for (auto _ : state) benchmark::DoNotOptimize(innoscope::kernels::cluster_means(pts, labels, 4, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_FkmRestarts(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(1912, 14, 5);
  innoscope::FitOptions opts;
  opts.restarts = 16;
  opts.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(innoscope::fit_fkm(x, 4, 2, opts).objective);
}

}  // namespace

BENCHMARK(BM_Gram)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {1912, 20000}});
BENCHMARK(BM_NearestCentroid)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {1912, 20000}});
BENCHMARK(BM_ClusterMeans)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {1912, 20000}});
BENCHMARK(BM_FkmRestarts)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
