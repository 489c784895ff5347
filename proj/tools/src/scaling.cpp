#include "rboost_cli/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rboost/data.hpp"
#include "rboost/error.hpp"
#include "rboost/proj_boost.hpp"
#include "rboost/rank_boost.hpp"

namespace rboost::cli {

namespace {

Dataset blobs(int k, std::size_t d, std::size_t m, std::uint64_t seed) {
  const std::size_t per_class = std::max<std::size_t>(1, m / static_cast<std::size_t>(k));
  return gen_gaussian_blobs(k, d, per_class, 1.0, seed);
}

}  // namespace

TimingPoint time_rank_iteration(std::size_t n, std::size_t m, int k, std::size_t d,
                                std::size_t iters, std::size_t repeats, std::uint64_t seed) {
  const Dataset ds = blobs(k, d, m, seed);
  const ProjectionBank bank = build_bank(k, n, d, seed, BankVariant::kRank);
  TimingPoint pt{n, ds.m(), k, d, std::numeric_limits<double>::infinity(), 0.0};
  RankOptions opts;
  opts.T = iters;
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repeats); ++rep) {
    const auto result = train_stagewise(ds, bank, opts);
    std::vector<double> secs;
    for (const auto& it : result.history.iterations) secs.push_back(it.seconds);
    if (secs.empty()) throw NumericError("scaling run stopped before its first iteration");
    std::nth_element(secs.begin(), secs.begin() + static_cast<std::ptrdiff_t>(secs.size() / 2), secs.end());
    pt.seconds = std::min(pt.seconds, secs[secs.size() / 2]);
  }
  return pt;
}

TimingPoint time_proj_iteration(std::size_t n, std::size_t m, int k, std::size_t d,
                                std::size_t iters, std::size_t repeats, std::uint64_t seed) {
  const Dataset ds = blobs(k, d, m, seed);
  const ProjectionBank bank = build_bank(k, n, iters, seed, BankVariant::kProj);
  TimingPoint pt{n, ds.m(), k, d, std::numeric_limits<double>::infinity(), 0.0};
  ProjOptions opts;
  opts.nu = 1e-6;
  opts.eps_rel = 0.0;
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repeats); ++rep) {
    const auto result = train_proj(ds, bank, opts);
    double total = 0.0;
    double solve = 0.0;
    for (const auto& it : result.history.iterations) {
      total += it.seconds;
      solve += it.solve_seconds;
    }
    const auto count = static_cast<double>(result.history.iterations.size());
    if (total / count < pt.seconds) {
      pt.seconds = total / count;
      pt.solve_seconds = solve / count;
    }
  }
  return pt;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs two or more points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

double rank_fit_deviation(const std::vector<TimingPoint>& points) {
  std::vector<double> c;
  for (const auto& p : points) c.push_back(p.seconds / (static_cast<double>(p.n) * static_cast<double>(p.m) * p.k));
  double mean = 0.0;
  for (double v : c) mean += v;
  mean /= static_cast<double>(c.size());
  double worst = 0.0;
  for (double v : c) worst = std::max(worst, std::abs(v - mean) / mean);
  return worst;
}

ProjFit fit_proj_model(const std::vector<TimingPoint>& points) {
  if (points.empty()) throw InvalidArgument("fit needs at least one point");
  // Relative residuals: every row is divided by its measurement.
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& p : points) {
    const double n = static_cast<double>(p.n);
    a.push_back(n * static_cast<double>(p.m) * static_cast<double>(p.k + static_cast<int>(p.d)) / p.seconds);
    b.push_back(n * n * n / p.seconds);
  }
  auto residual = [&](double c1, double c2) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r += (c1 * a[i] + c2 * b[i] - 1.0) * (c1 * a[i] + c2 * b[i] - 1.0);
    return r;
  };
  double saa = 0.0, sbb = 0.0, sab = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
    sa += a[i];
    sb += b[i];
  }
  std::vector<std::pair<double, double>> candidates{{sa / saa, 0.0}, {0.0, sb / sbb}};
  const double det = saa * sbb - sab * sab;
  if (det > 0.0) {
    const double c1 = (sa * sbb - sb * sab) / det;
    const double c2 = (sb * saa - sa * sab) / det;
    if (c1 >= 0.0 && c2 >= 0.0) candidates.emplace_back(c1, c2);
  }
  ProjFit best;
  double best_r = std::numeric_limits<double>::infinity();
  for (const auto& [c1, c2] : candidates) {
    const double r = residual(c1, c2);
    if (r < best_r) {
      best_r = r;
      best.c1 = c1;
      best.c2 = c2;
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    best.max_deviation = std::max(best.max_deviation, std::abs(best.c1 * a[i] + best.c2 * b[i] - 1.0));
  }
  return best;
}

}  // namespace rboost::cli
