#include "rboost/weak.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "rboost/error.hpp"
#include "rboost/parallel.hpp"

namespace rboost {

SortedIndex::SortedIndex(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), order_(rows * cols, 0) {
  if (rows > kRowMask) throw InvalidArgument("too many rows for a sorted index");
}

std::vector<std::size_t> SortedIndex::permutation(std::size_t col) const {
  std::vector<std::size_t> perm(rows_);
  for (std::size_t j = 0; j < rows_; ++j) perm[j] = row(col, j);
  return perm;
}

void SortedIndex::assign_column(std::size_t col, std::span<const double> values) {
  auto out = raw(col);
  std::iota(out.begin(), out.end(), 0u);
  std::stable_sort(out.begin(), out.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  for (std::size_t j = 0; j + 1 < rows_; ++j) {
    if (values[out[j]] == values[out[j + 1] & kRowMask]) out[j] |= kTieFlag;
  }
}

SortedIndex build_sort_index(const Eigen::MatrixXd& features) {
  const auto rows = static_cast<std::size_t>(features.rows());
  const auto cols = static_cast<std::size_t>(features.cols());
  SortedIndex index(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    index.assign_column(c, {features.col(static_cast<Eigen::Index>(c)).data(), rows});
  }
  return index;
}

double tie_slack(std::span<const double> weights) {
  double scale = 0.0;
  for (double w : weights) scale += std::abs(w);
  return kTieTolerance * scale;
}

ColumnSplit scan_column(std::span<const std::uint32_t> flagged_order,
                        std::span<const double> weights, double total, double slack) {
  ColumnSplit best;
  const auto consider = [&best, slack](double score, std::ptrdiff_t split, int polarity) {
    if (score > best.score + slack) best = {score, split, polarity};
  };
  const std::size_t n = flagged_order.size();
  consider(total, -1, 1);
  consider(-total, -1, -1);
  double prefix = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::uint32_t entry = flagged_order[j];
    prefix += weights[entry & SortedIndex::kRowMask];
    if (entry & SortedIndex::kTieFlag) continue;
    const double score = total - 2.0 * prefix;
    consider(score, static_cast<std::ptrdiff_t>(j), 1);
    consider(-score, static_cast<std::ptrdiff_t>(j), -1);
  }
  consider(-total, static_cast<std::ptrdiff_t>(n) - 1, 1);
  consider(total, static_cast<std::ptrdiff_t>(n) - 1, -1);
  return best;
}

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

double stump_score(const Eigen::MatrixXd& points, std::span<const double> weights,
                   const Stump& stump) {
  double score = 0.0;
  const auto col = static_cast<Eigen::Index>(stump.dim);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    score += weights[static_cast<std::size_t>(i)] * stump.evaluate(points(i, col));
  }
  return score;
}

DimSplit best_split(const SortedIndex& index, std::span<const double> weights, double total) {
  const double slack = tie_slack(weights);
  DimSplit best;
  for (std::size_t dim = 0; dim < index.cols(); ++dim) {
    const ColumnSplit s = scan_column(index.raw(dim), weights, total, slack);
    if (s.score > best.split.score + slack) best = {s, dim};
  }
  return best;
}

Stump make_stump(const Eigen::MatrixXd& points, const SortedIndex& index, const DimSplit& best) {
  Stump stump;
  stump.dim = best.dim;
  stump.polarity = best.split.polarity;
  const auto col = static_cast<Eigen::Index>(best.dim);
  if (best.split.split < 0) {
    stump.threshold = -std::numeric_limits<double>::infinity();
  } else if (static_cast<std::size_t>(best.split.split) + 1 >= index.rows()) {
    stump.threshold = std::numeric_limits<double>::infinity();
  } else {
    const auto j = static_cast<std::size_t>(best.split.split);
    stump.threshold =
        split_threshold(points(static_cast<Eigen::Index>(index.row(best.dim, j)), col),
                        points(static_cast<Eigen::Index>(index.row(best.dim, j + 1)), col));
  }
  return stump;
}

StumpFit train_stump(const Eigen::MatrixXd& points, std::span<const double> weights,
                     const SortedIndex& index) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (weights.size() != n) throw InvalidArgument("weight count does not match points");
  if (index.rows() != n || index.cols() != static_cast<std::size_t>(points.cols())) {
    throw InvalidArgument("sorted index does not match points");
  }
  if (std::all_of(weights.begin(), weights.end(), [](double c) { return c == 0.0; })) {
    throw InvalidArgument("stump training needs at least one nonzero weight");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double slack = tie_slack(weights);

  // Chunks keep their first maximum; merging them in order with the same
  // comparison reproduces the serial lowest-dimension tie-break.
  const std::size_t chunks = std::min(index.cols(), 4 * max_threads());
  std::vector<DimSplit> chunk_best(chunks);
  parallel_for(0, index.cols(), chunks, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t dim = b; dim < e; ++dim) {
      const ColumnSplit s = scan_column(index.raw(dim), weights, total, slack);
      if (s.score > chunk_best[c].split.score + slack) chunk_best[c] = {s, dim};
    }
  });
  DimSplit best;
  for (const auto& cb : chunk_best) {
    if (cb.split.score > best.split.score + slack) best = cb;
  }

  StumpFit fit;
  fit.stump = make_stump(points, index, best);
  fit.score = stump_score(points, weights, fit.stump);
  return fit;
}

WldaFit train_wlda_stump(const Eigen::MatrixXd& points, std::span<const int> labels,
                         std::span<const double> weights, std::optional<double> ridge) {
  const auto n = points.rows();
  const auto d = points.cols();
  if (labels.size() != static_cast<std::size_t>(n) ||
      weights.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("label/weight count does not match points");
  }
  double w_pos = 0.0;
  double w_neg = 0.0;
  Eigen::VectorXd mu_pos = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mu_neg = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (w < 0.0) throw InvalidArgument("WLDA weights must be nonnegative");
    if (labels[static_cast<std::size_t>(i)] > 0) {
      w_pos += w;
      mu_pos += w * points.row(i).transpose();
    } else {
      w_neg += w;
      mu_neg += w * points.row(i).transpose();
    }
  }
  if (!(w_pos > 0.0) || !(w_neg > 0.0)) {
    throw InvalidArgument("WLDA needs positive total weight in both classes");
  }
  mu_pos /= w_pos;
  mu_neg /= w_neg;

  // Rows centred on their class mean and scaled by sqrt(w / W_class).
  Eigen::MatrixXd centred(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    const bool pos = labels[static_cast<std::size_t>(i)] > 0;
    const double scale = std::sqrt(w / (pos ? w_pos : w_neg));
    centred.row(i) = scale * (points.row(i) - (pos ? mu_pos : mu_neg).transpose());
  }
  Eigen::MatrixXd scatter = centred.transpose() * centred;
  const double lambda = ridge.value_or(1e-6 * scatter.trace() / static_cast<double>(d));
  scatter.diagonal().array() += lambda;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(scatter);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-14)) {
    throw NumericError("WLDA scatter matrix is singular");
  }
  WldaFit fit;
  fit.direction.ridge = lambda;
  fit.direction.direction = ldlt.solve(mu_pos - mu_neg);
  if (!fit.direction.direction.allFinite()) throw NumericError("WLDA solve produced non-finite values");

  Eigen::MatrixXd projected = points * fit.direction.direction;
  std::vector<double> signed_weights(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < signed_weights.size(); ++i) {
    signed_weights[i] = labels[i] > 0 ? weights[i] : -weights[i];
  }
  const StumpFit s = train_stump(projected, signed_weights, build_sort_index(projected));
  fit.stump = s.stump;
  fit.score = s.score;
  return fit;
}

double WeakHypothesis::feature(std::span<const double> z) const {
  if (direction.empty()) return z[stump.dim];
  double v = 0.0;
  for (std::size_t j = 0; j < dims.size(); ++j) v += direction[j] * z[dims[j]];
  return v;
}

}  // namespace rboost
