#include "rboost/projection.hpp"

#include <cmath>

#include "rboost/error.hpp"
#include "rboost/random.hpp"

namespace rboost {

std::string to_string(BankVariant v) {
  return v == BankVariant::kRank ? "rank" : "proj";
}

BankVariant bank_variant_from_string(const std::string& s) {
  if (s == "rank") return BankVariant::kRank;
  if (s == "proj") return BankVariant::kProj;
  throw DataError("unknown bank variant '" + s + "'");
}

void fill_gaussian_matrix(std::uint64_t key, Eigen::MatrixXd& out) {
  GaussianStream normal(key);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.rows()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = normal.next() * scale;
  }
}

ProjectionBank::ProjectionBank(const BankDescriptor& desc) : desc_(desc) {
  if (desc_.k < 2) throw InvalidArgument("projection bank needs k >= 2");
  if (desc_.rows < 1 || desc_.cols < 1) {
    throw InvalidArgument("projection bank dimensions must be >= 1");
  }
  if (desc_.generator != kGeneratorId) {
    throw DataError("unsupported generator '" + desc_.generator + "'");
  }
  if (desc_.version > kBankVersion) {
    throw DataError("bank descriptor version " + std::to_string(desc_.version) +
                    " is newer than supported");
  }
  matrices_.reserve(static_cast<std::size_t>(desc_.k));
  for (int r = 1; r <= desc_.k; ++r) {
    Eigen::MatrixXd p(static_cast<Eigen::Index>(desc_.rows),
                      static_cast<Eigen::Index>(desc_.cols));
    fill_gaussian_matrix(derive_stream_key(desc_.seed, static_cast<std::uint64_t>(r)), p);
    matrices_.push_back(std::move(p));
  }
}

const Eigen::MatrixXd& ProjectionBank::matrix(int r) const {
  if (r < 1 || r > desc_.k) {
    throw InvalidArgument("class index " + std::to_string(r) + " outside 1.." +
                          std::to_string(desc_.k));
  }
  return matrices_[static_cast<std::size_t>(r - 1)];
}

ProjectionBank build_bank(int k, std::size_t rows, std::size_t cols,
                          std::uint64_t seed, BankVariant variant) {
  BankDescriptor desc;
  desc.seed = seed;
  desc.k = k;
  desc.rows = rows;
  desc.cols = cols;
  desc.variant = variant;
  return ProjectionBank(desc);
}

Eigen::VectorXd project(const ProjectionBank& bank, int r, std::span<const double> x) {
  const auto& p = bank.matrix(r);
  if (x.size() != bank.cols()) {
    throw InvalidArgument("projection expects a length-" + std::to_string(bank.cols()) +
                          " vector, got " + std::to_string(x.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return p * v;
}

std::size_t ProjectedViews::memory_reals() const {
  std::size_t total = 0;
  for (const auto& v : views) total += static_cast<std::size_t>(v.size());
  return total;
}

ProjectedViews project_views(const ProjectionBank& bank, const Dataset& ds) {
  if (bank.variant() != BankVariant::kRank) {
    throw InvalidArgument("projected views need a rank-variant bank");
  }
  if (bank.cols() != ds.d()) {
    throw InvalidArgument("bank has " + std::to_string(bank.cols()) +
                          " columns but data has d = " + std::to_string(ds.d()));
  }
  ProjectedViews out;
  out.views.reserve(static_cast<std::size_t>(bank.k()));
  for (int r = 1; r <= bank.k(); ++r) {
    out.views.push_back(ds.features() * bank.matrix(r).transpose());
  }
  return out;
}

ViewCache::ViewCache(const ProjectionBank& bank, const Dataset& ds)
    : bank_(&bank), ds_(&ds) {}

const ProjectedViews& ViewCache::get() {
  if (!computed_) {
    views_ = project_views(*bank_, *ds_);
    computed_ = true;
  }
  return views_;
}

}  // namespace rboost
