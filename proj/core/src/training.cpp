#include "rboost/training.hpp"

#include "rboost/error.hpp"

namespace rboost {

std::string to_string(WeakKind w) { return w == WeakKind::kStump ? "stump" : "wlda"; }

WeakKind weak_kind_from_string(const std::string& s) {
  if (s == "stump") return WeakKind::kStump;
  if (s == "wlda") return WeakKind::kWlda;
  throw InvalidArgument("unknown weak learner '" + s + "'");
}

int argmax_label(const double* scores, int k) {
  int best = 0;
  for (int r = 1; r < k; ++r) {
    if (scores[r] > scores[best]) best = r;
  }
  return best + 1;
}

double error_rate(const Eigen::MatrixXd& scores, std::span<const int> labels) {
  if (static_cast<std::size_t>(scores.rows()) != labels.size() || labels.empty()) {
    throw InvalidArgument("error_rate: score rows must match a non-empty label list");
  }
  const Eigen::MatrixXd by_row = scores.transpose();
  const auto k = static_cast<int>(scores.cols());
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (argmax_label(by_row.col(static_cast<Eigen::Index>(i)).data(), k) != labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

}  // namespace rboost
