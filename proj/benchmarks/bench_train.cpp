#include <benchmark/benchmark.h>

#include "rboost/data.hpp"
#include "rboost/proj_boost.hpp"
#include "rboost/projection.hpp"
#include "rboost/rank_boost.hpp"

namespace {

constexpr std::size_t kIterations = 20;

// Args: per-class samples, bank rows.
void BM_RankStagewise(benchmark::State& state) {
  const int k = 4;
  const auto data = rboost::gen_gaussian_blobs(k, 10, static_cast<std::size_t>(state.range(0)), 1.0, 3);
  const auto bank = rboost::build_bank(k, static_cast<std::size_t>(state.range(1)), data.d(), 3,
                                       rboost::BankVariant::kRank);
  rboost::RankOptions opts;
  opts.T = kIterations;
  for (auto _ : state) {
    auto result = rboost::train_stagewise(data, bank, opts);
    benchmark::DoNotOptimize(result.model);
  }
  state.SetItemsProcessed(state.iterations() * kIterations);
}
BENCHMARK(BM_RankStagewise)
    ->ArgsProduct({{100, 400}, {100, 400}})
    ->Unit(benchmark::kMillisecond);

void BM_RankTotallyCorrective(benchmark::State& state) {
  const int k = 4;
  const auto data = rboost::gen_gaussian_blobs(k, 10, static_cast<std::size_t>(state.range(0)), 1.0, 3);
  const auto bank = rboost::build_bank(k, static_cast<std::size_t>(state.range(1)), data.d(), 3,
                                       rboost::BankVariant::kRank);
  rboost::RankOptions opts;
  opts.T = kIterations;
  opts.loss = "logistic";
  for (auto _ : state) {
    auto result = rboost::train_totally_corrective(data, bank, opts);
    benchmark::DoNotOptimize(result.model);
  }
  state.SetItemsProcessed(state.iterations() * kIterations);
}
BENCHMARK(BM_RankTotallyCorrective)
    ->ArgsProduct({{100, 400}, {100}})
    ->Unit(benchmark::kMillisecond);

// Args: per-class samples, bank rows (the solver dimension).
void BM_Proj(benchmark::State& state) {
  const int k = 4;
  const auto data = rboost::gen_gaussian_blobs(k, 10, static_cast<std::size_t>(state.range(0)), 1.0, 3);
  const auto bank = rboost::build_bank(k, static_cast<std::size_t>(state.range(1)), kIterations, 3,
                                       rboost::BankVariant::kProj);
  const rboost::ProjOptions opts;
  for (auto _ : state) {
    auto result = rboost::train_proj(data, bank, opts);
    benchmark::DoNotOptimize(result.model);
  }
  state.SetItemsProcessed(state.iterations() * kIterations);
}
BENCHMARK(BM_Proj)
    ->ArgsProduct({{10, 40}, {100, 400}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
