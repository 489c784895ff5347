#pragma once

#include <cstdint>
#include <vector>

namespace rboost::cli {

struct TimingPoint {
  std::size_t n = 0;
  std::size_t m = 0;
  int k = 0;
  std::size_t d = 0;
  double seconds = 0.0;        // per boosting iteration
  double solve_seconds = 0.0;  // per iteration, coefficient solver only
};

/// Stage-wise rank iteration time on Gaussian blobs (median over `iters`
/// iterations, minimum over `repeats` runs). Sorting and projection are
/// excluded.
TimingPoint time_rank_iteration(std::size_t n, std::size_t m, int k, std::size_t d,
                                std::size_t iters, std::size_t repeats, std::uint64_t seed);

/// Proj iteration time on Gaussian blobs, mean over `iters` iterations with
/// the relative-decrease stop disabled, minimum over `repeats` runs.
TimingPoint time_proj_iteration(std::size_t n, std::size_t m, int k, std::size_t d,
                                std::size_t iters, std::size_t repeats, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Largest relative deviation of seconds / (n m k) from its mean.
double rank_fit_deviation(const std::vector<TimingPoint>& points);

struct ProjFit {
  double c1 = 0.0;  // coefficient of n m (k + d)
  double c2 = 0.0;  // coefficient of n^3
  double max_deviation = 0.0;  // largest |fit - measured| / measured
};

/// Non-negative least-squares fit of seconds = c1 n m (k + d) + c2 n^3.
ProjFit fit_proj_model(const std::vector<TimingPoint>& points);

}  // namespace rboost::cli
