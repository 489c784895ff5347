#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rboost/data.hpp"

namespace rboost {

/// Which boosting variant a bank serves: `rank` projects raw data (n x d),
/// `proj` projects weak-learner output vectors (n x T).
enum class BankVariant { kRank, kProj };

std::string to_string(BankVariant v);
BankVariant bank_variant_from_string(const std::string& s);

inline constexpr const char* kGeneratorId = "splitmix64-boxmuller";
inline constexpr int kBankVersion = 1;

/// Everything needed to regenerate a bank bit-for-bit.
struct BankDescriptor {
  std::uint64_t seed = 0;
  int k = 2;
  std::size_t rows = 1;
  std::size_t cols = 1;
  BankVariant variant = BankVariant::kRank;
  std::string generator = kGeneratorId;
  int version = kBankVersion;

  friend bool operator==(const BankDescriptor&, const BankDescriptor&) = default;
};

/// k seeded Gaussian matrices P(1..k), each rows x cols with entries a/sqrt(rows),
/// a ~ N(0,1). Class r draws from stream r of the master seed, filling its
/// matrix in row-major order, so a bank is prefix-stable when k grows.
class ProjectionBank {
 public:
  explicit ProjectionBank(const BankDescriptor& desc);

  const BankDescriptor& descriptor() const noexcept { return desc_; }
  int k() const noexcept { return desc_.k; }
  std::size_t rows() const noexcept { return desc_.rows; }
  std::size_t cols() const noexcept { return desc_.cols; }
  BankVariant variant() const noexcept { return desc_.variant; }

  /// Matrix of class r, r in 1..k.
  const Eigen::MatrixXd& matrix(int r) const;

 private:
  BankDescriptor desc_;
  std::vector<Eigen::MatrixXd> matrices_;
};

ProjectionBank build_bank(int k, std::size_t rows, std::size_t cols,
                          std::uint64_t seed, BankVariant variant);

/// Fills `out` (rows x cols) with one Gaussian matrix drawn from `key`.
void fill_gaussian_matrix(std::uint64_t key, Eigen::MatrixXd& out);

/// P(r) x. Throws InvalidArgument on a bad class index or dimension.
Eigen::VectorXd project(const ProjectionBank& bank, int r,
                        std::span<const double> x);

/// Projected copies of a dataset for the rank variant: views[r-1] is m x n
/// with row i equal to P(r) x_i.
struct ProjectedViews {
  std::vector<Eigen::MatrixXd> views;

  /// Number of stored reals, k * m * n.
  std::size_t memory_reals() const;
};

/// Computes the views once; later calls with the same bank and dataset
/// return the cached copy.
class ViewCache {
 public:
  ViewCache(const ProjectionBank& bank, const Dataset& ds);
  const ProjectedViews& get();
  bool computed() const noexcept { return computed_; }

 private:
  const ProjectionBank* bank_;
  const Dataset* ds_;
  ProjectedViews views_;
  bool computed_ = false;
};

ProjectedViews project_views(const ProjectionBank& bank, const Dataset& ds);

}  // namespace rboost
