#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rboost {

/// Axis-aligned threshold classifier:
///   h(z) = polarity * sign(z[dim] - threshold),  sign(0) = +1.
/// threshold is a midpoint between adjacent distinct training values, or
/// -inf / +inf for a constant classifier.
struct Stump {
  std::size_t dim = 0;
  double threshold = -std::numeric_limits<double>::infinity();
  int polarity = 1;

  int evaluate(double value) const noexcept {
    return value >= threshold ? polarity : -polarity;
  }
  int operator()(std::span<const double> z) const { return evaluate(z[dim]); }

  friend bool operator==(const Stump&, const Stump&) = default;
};

/// Per-column ascending sort orders, stable (ties keep row order). Each
/// stored entry also records whether the next sorted value is equal, which
/// is what the threshold scan needs to skip non-splits.
class SortedIndex {
 public:
  SortedIndex() = default;
  SortedIndex(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  /// Row index at sorted position j of column `col`.
  std::size_t row(std::size_t col, std::size_t j) const {
    return order_[col * rows_ + j] & kRowMask;
  }
  /// True when sorted position j and j + 1 hold equal values.
  bool ties_next(std::size_t col, std::size_t j) const {
    return (order_[col * rows_ + j] & kTieFlag) != 0;
  }
  /// Plain permutation of column `col`.
  std::vector<std::size_t> permutation(std::size_t col) const;

  /// Raw flagged entries for column `col`.
  std::span<const std::uint32_t> raw(std::size_t col) const {
    return {order_.data() + col * rows_, rows_};
  }
  std::span<std::uint32_t> raw(std::size_t col) {
    return {order_.data() + col * rows_, rows_};
  }

  /// Sorts `values` (length rows()) into column `col`.
  void assign_column(std::size_t col, std::span<const double> values);

  static constexpr std::uint32_t kTieFlag = 0x80000000u;
  static constexpr std::uint32_t kRowMask = 0x7fffffffu;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> order_;
};

SortedIndex build_sort_index(const Eigen::MatrixXd& features);

/// Best threshold within one sorted column.
struct ColumnSplit {
  double score = -std::numeric_limits<double>::infinity();
  /// -1: threshold -inf (all points above). rows - 1: threshold +inf.
  /// Otherwise the split falls between sorted positions split and split + 1.
  std::ptrdiff_t split = -1;
  int polarity = 1;
};

/// Scores closer than tie_slack(weights) count as equal, so the tie order
/// decides between them regardless of summation order.
inline constexpr double kTieTolerance = 1e-12;
double tie_slack(std::span<const double> weights);

/// Scans thresholds in ascending order, polarity +1 before -1. A later
/// candidate replaces the current one only when it is larger by more than
/// `slack`. `total` is the sum of all weights.
ColumnSplit scan_column(std::span<const std::uint32_t> flagged_order,
                        std::span<const double> weights, double total, double slack = 0.0);

/// Threshold strictly above `lo` and at most `hi` (lo < hi): the midpoint,
/// or `hi` when the midpoint rounds down onto `lo`.
double split_threshold(double lo, double hi);

/// Best split over all columns of `index`, serially, lowest column on ties
/// (within tie_slack).
/// All-zero weights are allowed (the result is then the constant stump).
struct DimSplit {
  ColumnSplit split;
  std::size_t dim = 0;
};
DimSplit best_split(const SortedIndex& index, std::span<const double> weights, double total);

/// Turns a split into a stump with a concrete threshold.
Stump make_stump(const Eigen::MatrixXd& points, const SortedIndex& index, const DimSplit& best);

struct StumpFit {
  Stump stump;
  double score = 0.0;
};

/// Stump maximising sum_p c_p h(points_p) over all dimensions, midpoint
/// thresholds, sentinels and polarities. Ties go to the lowest dimension,
/// then the lowest threshold, then polarity +1. The returned score is the
/// weighted sum re-evaluated directly in row order.
StumpFit train_stump(const Eigen::MatrixXd& points, std::span<const double> weights,
                     const SortedIndex& index);

/// sum_p weights_p * h(points_p) accumulated in row order.
double stump_score(const Eigen::MatrixXd& points, std::span<const double> weights,
                   const Stump& stump);

/// Weighted Fisher direction v solving (S1 + S2 + ridge I) v = mu1 - mu2.
struct WldaDirection {
  Eigen::VectorXd direction;
  double ridge = 0.0;
};

struct WldaFit {
  WldaDirection direction;
  Stump stump;  // over the 1-D projected values (dim 0)
  double score = 0.0;
};

/// Default ridge: 1e-6 * trace(S1 + S2) / d.
/// labels are +1 / -1, weights >= 0. The 1-D stump is trained with signed
/// weights label_i * weight_i on the projected values.
WldaFit train_wlda_stump(const Eigen::MatrixXd& points, std::span<const int> labels,
                         std::span<const double> weights,
                         std::optional<double> ridge = std::nullopt);

/// Weak hypothesis stored in models: a plain stump on one coordinate, or a
/// stump on a linear combination of selected coordinates.
struct WeakHypothesis {
  Stump stump;
  std::vector<std::size_t> dims;   // linear learners only
  std::vector<double> direction;   // empty for a plain stump

  bool is_linear() const noexcept { return !direction.empty(); }

  /// The scalar the stump thresholds.
  double feature(std::span<const double> z) const;
  int operator()(std::span<const double> z) const { return stump.evaluate(feature(z)); }

  friend bool operator==(const WeakHypothesis&, const WeakHypothesis&) = default;
};

}  // namespace rboost
