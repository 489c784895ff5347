#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rboost/data.hpp"
#include "rboost/optim.hpp"
#include "rboost/projection.hpp"
#include "rboost/training.hpp"
#include "rboost/weak.hpp"

namespace rboost {

/// Multi-class model sharing one coefficient vector across classes; class r
/// sees the data through P(r):  score_r(x) = sum_t w_t h_t(P(r) x).
struct RankModel {
  BankDescriptor bank;
  std::vector<WeakHypothesis> learners;
  std::vector<double> w;
  int k = 2;
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> label_map;

  friend bool operator==(const RankModel&, const RankModel&) = default;
};

/// Training-time state. Projected points are indexed p = i*k + (r-1) and hold
/// P(r) x_i; pairs (i, r != y_i) are indexed q = i*(k-1) + j, j enumerating the
/// wrong classes in increasing order.
class RankTrainState {
 public:
  RankTrainState(const Dataset& train, const ProjectionBank& bank);

  std::size_t m() const noexcept { return m_; }
  int k() const noexcept { return k_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  std::size_t num_pairs() const noexcept { return m_ * static_cast<std::size_t>(k_ - 1); }
  std::size_t num_points() const noexcept { return m_ * static_cast<std::size_t>(k_); }

  std::size_t point(std::size_t i, int r) const noexcept {
    return i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(r - 1);
  }
  std::size_t pair_sample(std::size_t q) const noexcept { return q / static_cast<std::size_t>(k_ - 1); }
  int pair_class(std::size_t q) const noexcept;

  std::span<const int> labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  const SortedIndex& index() const noexcept { return index_; }

  /// Weak-learner outputs (+1/-1) on every projected point.
  std::vector<int> outputs(const WeakHypothesis& h) const;
  /// delta h over pairs: h(P(y_i) x_i) - h(P(r) x_i).
  Eigen::VectorXd delta_h(const std::vector<int>& outputs) const;

  /// Ensemble scores F on every projected point.
  const Eigen::VectorXd& scores() const noexcept { return scores_; }
  void set_scores(Eigen::VectorXd scores) { scores_ = std::move(scores); }
  double train_error() const;

  Eigen::VectorXd u;    // pair weights
  Eigen::VectorXd rho;  // pair margins

 private:
  std::size_t m_;
  int k_;
  std::vector<int> labels_;
  Eigen::MatrixXd points_;
  SortedIndex index_;
  Eigen::VectorXd scores_;
};

/// Signed point weights c with sum_p c_p h(z_p) = sum_q u_q delta h_q:
/// c(i, y_i) = sum_{r != y_i} u_ir,  c(i, r) = -u_ir.
Eigen::VectorXd pairpoint_weights(const RankTrainState& state);
Eigen::VectorXd pairpoint_weights(const Eigen::VectorXd& u, std::span<const int> labels, int k);

/// 1/4 log(Q+ / Q-) with both floored at 1e-12.
double stagewise_weight_discrete(double q_plus, double q_minus);
/// 1/2 log((1+b)/(1-b)) with b clamped to +-(1 - 1e-12).
double stagewise_weight_real(double b);

enum class StagewiseMode { kDiscrete, kReal };

std::string to_string(StagewiseMode m);
StagewiseMode stagewise_mode_from_string(const std::string& s);

struct RankOptions {
  std::size_t T = 100;
  StagewiseMode mode = StagewiseMode::kDiscrete;
  double nu = 1e-4;                  // totally-corrective only
  std::string loss = "exp-logsum";   // totally-corrective only
  double epsilon = 1e-5;             // slack of the dual-violation stop test
  SolverSpec solver;
  WeakKind weak = WeakKind::kStump;
  std::size_t wlda_dims = 1000;
  std::uint64_t seed = 0;            // WLDA dimension subsampling
  /// Called after every completed iteration.
  std::function<void(const RankTrainState&, const IterationRecord&)> observer;
};

struct RankTrainResult {
  RankModel model;
  TrainHistory history;
};

/// Stage-wise training with closed-form coefficients (nu = 0). Stops early
/// when no weak learner has a positive edge.
RankTrainResult train_stagewise(const Dataset& train, const ProjectionBank& bank,
                                const RankOptions& opts);

/// Column generation: add the most violated constraint, then re-solve all
/// coefficients. Stops when the best edge is at most nu + epsilon.
RankTrainResult train_totally_corrective(const Dataset& train, const ProjectionBank& bank,
                                         const RankOptions& opts);

/// Scores new samples. Each learner is reduced to one d-vector per class, so
/// the bank is only needed at construction.
class RankScorer {
 public:
  explicit RankScorer(const RankModel& model);
  explicit RankScorer(const RankModel& model, const ProjectionBank& bank);

  Prediction predict(std::span<const double> x) const;
  /// m x k score matrix for the rows of `features`.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& features) const;

 private:
  void init(const ProjectionBank& bank);
  RankModel model_;
  std::vector<Eigen::MatrixXd> feature_rows_;  // per class, d x T
};

Prediction predict_rank(const RankModel& model, std::span<const double> x);

}  // namespace rboost
