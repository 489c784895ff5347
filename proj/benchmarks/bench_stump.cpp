#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rboost/weak.hpp"

namespace {

struct StumpInput {
  Eigen::MatrixXd points;
  std::vector<double> weights;
};

StumpInput make_input(std::size_t rows, std::size_t dims) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  StumpInput in;
  in.points.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dims));
  for (Eigen::Index i = 0; i < in.points.size(); ++i) in.points.data()[i] = normal(gen);
  in.weights.resize(rows);
  for (auto& w : in.weights) w = normal(gen);
  return in;
}

void BM_SortIndex(benchmark::State& state) {
  const auto in = make_input(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) {
    auto idx = rboost::build_sort_index(in.points);
    benchmark::DoNotOptimize(idx);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SortIndex)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_TrainStump(benchmark::State& state) {
  const auto in = make_input(static_cast<std::size_t>(state.range(0)),
                             static_cast<std::size_t>(state.range(1)));
  const auto idx = rboost::build_sort_index(in.points);
  for (auto _ : state) {
    auto fit = rboost::train_stump(in.points, in.weights, idx);
    benchmark::DoNotOptimize(fit);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_TrainStump)
    ->ArgsProduct({{1024, 4096, 16384}, {16, 64, 256}})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
