#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace rboost {

struct EvalReport {
  std::size_t m = 0;
  int k = 0;
  double error = 0.0;
  /// confusion[true - 1][predicted - 1]
  std::vector<std::vector<std::size_t>> confusion;
};

/// Throws InvalidArgument on an empty set or mismatched lengths.
EvalReport evaluate_predictions(std::span<const int> predicted, std::span<const int> truth, int k);

/// Argmax labels (1-based, lowest index on ties) of an m x k score matrix.
std::vector<int> labels_from_scores(const Eigen::MatrixXd& scores);

}  // namespace rboost
