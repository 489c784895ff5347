#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rboost {

struct SolverSpec {
  int max_iterations = 100;
  /// Armijo sufficient-decrease constant of the projected backtracking search.
  double line_search_tolerance = 1e-5;
  /// Stop when (f_prev - f) / max(|f_prev|, |f|, 1) falls to this value.
  double convergence_factor = 1e7 * std::numeric_limits<double>::epsilon();
  int history_size = 5;
  /// Stop when the projected-gradient infinity norm is at most
  /// gradient_tolerance * max(1, |f|).
  double gradient_tolerance = 1e-6;
};

/// f(w) with its gradient written into `grad` (already sized like w).
using Objective = std::function<double(const Eigen::VectorXd& w, Eigen::VectorXd& grad)>;

enum class SolveStatus { kGradient, kDecrease, kIterations, kLineSearch };

std::string to_string(SolveStatus s);

struct SolveResult {
  Eigen::VectorXd w;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  SolveStatus status = SolveStatus::kIterations;
  double projected_gradient = 0.0;
};

/// Limited-memory quasi-Newton minimisation over w >= 0 with a projected
/// backtracking line search. w0 is clipped onto the orthant first.
/// Throws NumericError when f(w0) is not finite.
SolveResult minimize_bounded(const Objective& f, const Eigen::VectorXd& w0,
                             const SolverSpec& spec = {});

/// Infinity norm of the projected gradient at w (bound 0 on every coordinate).
double projected_gradient_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& grad);

// ---------------------------------------------------------------------------
// Losses over pair margins rho.

enum class LossKind { kExpLogSum, kLogistic };

/// A margin loss L(rho) together with its KKT map u = -dL/drho and the
/// Fenchel conjugate used for dual reporting.
///
///   exp-logsum: L = log sum exp(-rho),                       u = softmax(-rho)
///   logistic:   L = c * sum log(1 + exp(-rho)), c = 1/(mk),   u = c * sigmoid(-rho)
///
/// dual(u) = -conjugate(u) is the dual objective in maximisation form. For
/// feasible u (H^T u <= nu) it lower-bounds the regularised primal.
class Loss {
 public:
  static Loss exp_logsum();
  static Loss logistic(std::size_t m, int k);

  LossKind kind() const noexcept { return kind_; }
  std::string id() const;
  /// 1 for exp-logsum, 1/(mk) for logistic.
  double normalizer() const noexcept { return normalizer_; }

  double value(const Eigen::VectorXd& rho) const;
  Eigen::VectorXd kkt_weights(const Eigen::VectorXd& rho) const;
  /// exp-logsum: sum u log u.
  /// logistic:   c * sum [p log p + (1-p) log(1-p)], p = u / c.
  double conjugate(const Eigen::VectorXd& u) const;
  double dual(const Eigen::VectorXd& u) const { return -conjugate(u); }

 private:
  Loss(LossKind kind, double normalizer) : kind_(kind), normalizer_(normalizer) {}
  LossKind kind_;
  double normalizer_;
};

struct LossInfo {
  std::string id;
  std::string conjugate;
};

/// Registered losses: "exp-logsum" (Shannon entropy conjugate) and
/// "logistic" (binary entropy conjugate).
const std::vector<LossInfo>& conjugate_loss_table();

/// Looks up a registered loss; m and k set the logistic normalizer.
/// Throws InvalidArgument for an unknown id.
Loss make_loss(const std::string& id, std::size_t m, int k);

struct ValueGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// log sum_q exp(-(dH w)_q) + nu * sum w, with max-shift.
ValueGradient exp_logsum_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& dH,
                                   double nu);

/// (1/(mk)) sum_q log(1 + exp(-(A w)_q)) + nu * sum w.
ValueGradient logistic_mean_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& A,
                                      double nu, std::size_t m, int k);

/// loss(A w) + nu * sum w as a solver objective. A must outlive the result.
Objective regularized_objective(const Loss& loss, const Eigen::MatrixXd& A, double nu);

/// u_q = exp(-rho_q) / sum exp(-rho).
Eigen::VectorXd kkt_weights_exp(const Eigen::VectorXd& rho);

/// u_q = exp(-rho_q) / (mk (1 + exp(-rho_q))).
Eigen::VectorXd kkt_weights_logistic(const Eigen::VectorXd& rho, std::size_t m, int k);

/// log sum exp(-rho), stable.
double log_sum_exp_neg(const Eigen::VectorXd& rho);

/// log(1 + exp(-x)), stable for any finite x.
double softplus_neg(double x) noexcept;

}  // namespace rboost
