#include "rboost/metrics.hpp"

#include "rboost/error.hpp"
#include "rboost/training.hpp"

namespace rboost {

EvalReport evaluate_predictions(std::span<const int> predicted, std::span<const int> truth, int k) {
  if (truth.empty()) throw InvalidArgument("empty test set");
  if (predicted.size() != truth.size()) throw InvalidArgument("prediction and label counts differ");
  EvalReport rep;
  rep.m = truth.size();
  rep.k = k;
  rep.confusion.assign(static_cast<std::size_t>(k), std::vector<std::size_t>(static_cast<std::size_t>(k), 0));
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 1 || truth[i] > k || predicted[i] < 1 || predicted[i] > k) {
      throw InvalidArgument("label outside 1..k");
    }
    ++rep.confusion[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(predicted[i] - 1)];
    if (predicted[i] != truth[i]) ++wrong;
  }
  rep.error = static_cast<double>(wrong) / static_cast<double>(rep.m);
  return rep;
}

std::vector<int> labels_from_scores(const Eigen::MatrixXd& scores) {
  const Eigen::MatrixXd by_row = scores.transpose();
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = argmax_label(by_row.col(static_cast<Eigen::Index>(i)).data(), static_cast<int>(scores.cols()));
  }
  return out;
}

}  // namespace rboost
