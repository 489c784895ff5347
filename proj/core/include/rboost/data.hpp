#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rboost {

/// Dense multi-class dataset. Rows are samples, labels are contiguous 1..k.
///
/// `original_labels()[r - 1]` is the label value class r had in the source
/// file; loaders assign classes in order of first appearance. Immutable after
/// construction.
class Dataset {
 public:
  /// Validates: m >= 1, d >= 1, k >= 2, finite features, labels in 1..k.
  /// `original_labels` defaults to 1..k.
  Dataset(Eigen::MatrixXd features, std::vector<int> labels, int num_classes,
          std::vector<double> original_labels = {});

  /// Builds a dataset from raw label values, remapping them to 1..k in order
  /// of first appearance. Every class is therefore populated; k >= 2 required.
  static Dataset from_raw_labels(Eigen::MatrixXd features,
                                 std::span<const double> raw_labels);

  const Eigen::MatrixXd& features() const noexcept { return features_; }
  std::span<const int> labels() const noexcept { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const double> original_labels() const noexcept { return original_labels_; }

  std::size_t m() const noexcept { return static_cast<std::size_t>(features_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  int k() const noexcept { return k_; }

  /// Feature row i as a contiguous copy.
  Eigen::VectorXd row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)).transpose(); }

  /// Per-class sample counts, index r - 1 for class r.
  std::vector<std::size_t> class_counts() const;

  /// Rows selected by index, keeping k and the label map.
  Dataset subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  int k_;
  std::vector<double> original_labels_;
};

/// LIBSVM text format: `label idx:value ...`, 1-based strictly ascending
/// indices, missing entries are 0. LF or CRLF line endings.
Dataset load_libsvm(const std::filesystem::path& path);
Dataset parse_libsvm(std::istream& in);
void write_libsvm(const Dataset& ds, std::ostream& out);
void write_libsvm(const Dataset& ds, const std::filesystem::path& path);

/// CSV with the label in the last column. A first row containing any
/// non-numeric field is treated as a header.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::istream& in);
void write_csv(const Dataset& ds, std::ostream& out);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Loads by extension: `.csv` as CSV, anything else as LIBSVM.
Dataset load_dataset(const std::filesystem::path& path);

/// Four classes in 2-D sharing covariance [2.5 1.5; 1.5 1] with means
/// (-3,2), (-3,-2), (3,4), (3,0). Samples are ordered class by class.
Dataset gen_diagonal_gaussians(std::size_t per_class, std::uint64_t seed);

/// k isotropic unit-variance Gaussians in d dimensions whose means are drawn
/// from N(0, separation^2 I). Used for scaling studies over m, k and d.
Dataset gen_gaussian_blobs(int k, std::size_t d, std::size_t per_class,
                           double separation, std::uint64_t seed);

struct SplitSpec {
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
};

/// Stratified random split. The training part holds round(fraction * m)
/// samples; each class contributes within one sample of fraction * count.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Stratified fold assignment (values 0..folds-1), deterministic in seed.
std::vector<int> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed);

}  // namespace rboost
