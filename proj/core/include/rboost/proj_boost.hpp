#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rboost/data.hpp"
#include "rboost/optim.hpp"
#include "rboost/projection.hpp"
#include "rboost/training.hpp"
#include "rboost/weak.hpp"

namespace rboost {

/// Weak learners on the original features; class r scores the weak-output
/// vector through P(r):  score_r(x) = w^T P(r) [h_1(x), ..., h_T'(x), 0, ...]^T.
/// w has length n no matter how many learners were trained.
struct ProjModel {
  BankDescriptor bank;
  std::vector<WeakHypothesis> learners;
  std::vector<double> w;
  int k = 2;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t T = 0;
  std::vector<double> label_map;

  friend bool operator==(const ProjModel&, const ProjModel&) = default;
};

/// Training state. Pairs (i, r != y_i) use the same ordering as the rank
/// variant. Row q of A accumulates sum_j (P(y_i)[:, j] - P(r)[:, j]) H(i, j),
/// so the pair margins are A w.
class ProjTrainState {
 public:
  ProjTrainState(const Dataset& train, const ProjectionBank& bank);

  std::size_t m() const noexcept { return m_; }
  int k() const noexcept { return k_; }
  std::size_t n() const noexcept { return bank_->rows(); }
  std::size_t T() const noexcept { return bank_->cols(); }
  std::size_t num_pairs() const noexcept { return m_ * static_cast<std::size_t>(k_ - 1); }
  /// Number of columns of H filled so far; the next learner goes to column t().
  std::size_t t() const noexcept { return static_cast<std::size_t>(H_.cols()); }

  std::size_t pair_sample(std::size_t q) const noexcept { return q / static_cast<std::size_t>(k_ - 1); }
  int pair_class(std::size_t q) const noexcept;

  const Dataset& data() const noexcept { return *train_; }
  const ProjectionBank& bank() const noexcept { return *bank_; }
  const SortedIndex& index() const noexcept { return index_; }
  const Eigen::MatrixXd& H() const noexcept { return H_; }
  const Eigen::MatrixXd& A() const noexcept { return A_; }

  /// Signed sample weights g for row v (0-based) of the next column:
  /// g_i = sum_{r != y_i} u_ir (P(y_i)[v, t] - P(r)[v, t]).
  Eigen::VectorXd row_instance_weights(std::size_t v) const;
  /// All rows at once, m x n.
  Eigen::MatrixXd instance_weight_matrix() const;
  /// Learner-independent part of each row's score, C = A^T u.
  Eigen::VectorXd constraint_offsets() const;

  /// Appends a learner's outputs (+1/-1 per sample) as the next column.
  void append(const std::vector<int>& outputs);

  /// m x k training scores at the current w.
  Eigen::MatrixXd scores() const;
  double train_error() const;

  Eigen::VectorXd u;  // pair weights
  Eigen::VectorXd w;  // length n

 private:
  const Dataset* train_;
  const ProjectionBank* bank_;
  std::size_t m_;
  int k_;
  SortedIndex index_;
  Eigen::MatrixXd H_;
  Eigen::MatrixXd A_;
};

struct WeakSelection {
  WeakHypothesis h;
  std::size_t v = 0;  // 0-based projection row
  double score = 0.0;
};

/// Best (learner, row) pair for the next column: maximises
/// C_v + sum_i g_i h(x_i). Ties go to the lowest v, then to the stump order.
WeakSelection select_weak(const ProjTrainState& state, WeakKind weak = WeakKind::kStump);

struct ProjOptions {
  double nu = 1e-5;
  double eps_rel = 1e-5;
  SolverSpec solver;
  WeakKind weak = WeakKind::kStump;
  std::function<void(const ProjTrainState&, const IterationRecord&)> observer;
};

struct ProjTrainResult {
  ProjModel model;
  TrainHistory history;
};

/// Runs at most bank.cols() iterations. The reported objective includes the
/// constant log 2 / k contributed by the pairs r = y_i, so it starts at log 2.
ProjTrainResult train_proj(const Dataset& train, const ProjectionBank& bank,
                           const ProjOptions& opts);

class ProjScorer {
 public:
  explicit ProjScorer(const ProjModel& model);
  ProjScorer(const ProjModel& model, const ProjectionBank& bank);

  Prediction predict(std::span<const double> x) const;
  Eigen::MatrixXd scores(const Eigen::MatrixXd& features) const;

 private:
  void init(const ProjectionBank& bank);
  ProjModel model_;
  Eigen::MatrixXd q_;  // T' x k, column r-1 = P(r)[:, 1:T']^T w
};

Prediction predict_proj(const ProjModel& model, std::span<const double> x);

}  // namespace rboost
