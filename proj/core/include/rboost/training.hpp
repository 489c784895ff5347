#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rboost {

enum class WeakKind { kStump, kWlda };

std::string to_string(WeakKind w);
WeakKind weak_kind_from_string(const std::string& s);

/// One boosting iteration as reported by the trainers.
struct IterationRecord {
  std::size_t t = 0;           // 1-based iteration
  double objective = 0.0;      // primal objective after the update
  double edge = 0.0;           // edge of the selected weak learner
  double coefficient = 0.0;    // its coefficient (rank) or max w_v (proj)
  double train_error = 0.0;    // fraction misclassified
  double max_edge = 0.0;       // largest constraint value over selected columns
  double duality_gap = 0.0;    // NaN for stage-wise training
  double seconds = 0.0;        // wall time of the iteration
  double solve_seconds = 0.0;  // part of it spent in the coefficient solver
};

struct TrainHistory {
  std::vector<IterationRecord> iterations;
  std::string stop_reason;
};

struct Prediction {
  int label = 1;
  std::vector<double> scores;
};

/// Index of the largest score, lowest index on ties, as a 1-based label.
int argmax_label(const double* scores, int k);

/// Fraction of rows whose argmax over `scores` (m x k) differs from labels.
double error_rate(const Eigen::MatrixXd& scores, std::span<const int> labels);

}  // namespace rboost
