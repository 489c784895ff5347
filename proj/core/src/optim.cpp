#include "rboost/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rboost/error.hpp"

namespace rboost {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kGradient: return "gradient";
    case SolveStatus::kDecrease: return "decrease";
    case SolveStatus::kIterations: return "iterations";
    case SolveStatus::kLineSearch: return "line-search";
  }
  return "unknown";
}

double projected_gradient_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& grad) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double g = w[i] <= 0.0 ? std::min(grad[i], 0.0) : grad[i];
    norm = std::max(norm, std::abs(g));
  }
  return norm;
}

namespace {

Eigen::VectorXd project_orthant(const Eigen::VectorXd& w) { return w.cwiseMax(0.0); }

// Two-loop recursion restricted to the coordinates where mask = 1.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& grad, const Eigen::VectorXd& mask,
                                const std::deque<Eigen::VectorXd>& s_hist,
                                const std::deque<Eigen::VectorXd>& y_hist) {
  Eigen::VectorXd q = grad.cwiseProduct(mask);
  const std::size_t h = s_hist.size();
  std::vector<double> alpha(h, 0.0);
  std::vector<double> rho(h, 0.0);
  for (std::size_t j = h; j-- > 0;) {
    const Eigen::VectorXd s = s_hist[j].cwiseProduct(mask);
    const Eigen::VectorXd y = y_hist[j].cwiseProduct(mask);
    const double sy = s.dot(y);
    if (!(sy > 0.0)) continue;
    rho[j] = 1.0 / sy;
    alpha[j] = rho[j] * s.dot(q);
    q -= alpha[j] * y;
  }
  double gamma = 1.0;
  if (h > 0) {
    const Eigen::VectorXd s = s_hist.back().cwiseProduct(mask);
    const Eigen::VectorXd y = y_hist.back().cwiseProduct(mask);
    const double yy = y.squaredNorm();
    const double sy = s.dot(y);
    if (yy > 0.0 && sy > 0.0) gamma = sy / yy;
  }
  q *= gamma;
  for (std::size_t j = 0; j < h; ++j) {
    if (rho[j] == 0.0) continue;
    const Eigen::VectorXd s = s_hist[j].cwiseProduct(mask);
    const Eigen::VectorXd y = y_hist[j].cwiseProduct(mask);
    const double beta = rho[j] * y.dot(q);
    q += (alpha[j] - beta) * s;
  }
  return -q;
}

}  // namespace

SolveResult minimize_bounded(const Objective& f, const Eigen::VectorXd& w0,
                             const SolverSpec& spec) {
  if (spec.max_iterations < 0 || spec.history_size < 1 ||
      !(spec.line_search_tolerance > 0.0) || !(spec.convergence_factor > 0.0)) {
    throw InvalidArgument("solver settings must be positive");
  }
  SolveResult result;
  Eigen::VectorXd x = project_orthant(w0);
  Eigen::VectorXd g(x.size());
  double fx = f(x, g);
  result.evaluations = 1;
  if (!std::isfinite(fx) || !g.allFinite()) {
    throw NumericError("objective is not finite at the starting point");
  }

  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  Eigen::VectorXd x_new(x.size());
  Eigen::VectorXd g_new(x.size());
  result.status = SolveStatus::kIterations;
  bool restarted = false;

  for (int iter = 0;; ++iter) {
    const double pg = projected_gradient_norm(x, g);
    if (pg <= spec.gradient_tolerance * std::max(1.0, std::abs(fx))) {
      result.status = SolveStatus::kGradient;
      break;
    }
    if (iter >= spec.max_iterations) break;

    Eigen::VectorXd mask(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) mask[i] = (x[i] > 0.0 || g[i] < 0.0) ? 1.0 : 0.0;

    Eigen::VectorXd dir = lbfgs_direction(g, mask, s_hist, y_hist);
    if (!(g.dot(dir) < 0.0) || !dir.allFinite()) {
      dir = -g.cwiseProduct(mask);
      s_hist.clear();
      y_hist.clear();
    }
    double step = 1.0;
    if (s_hist.empty()) step = std::min(1.0, 1.0 / std::max(dir.lpNorm<Eigen::Infinity>(), 1e-300));

    bool accepted = false;
    double f_new = fx;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = project_orthant(x + step * dir);
      f_new = f(x_new, g_new);
      ++result.evaluations;
      if (std::isfinite(f_new) &&
          f_new <= fx + spec.line_search_tolerance * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++result.iterations;
    if (!accepted || (x_new - x).lpNorm<Eigen::Infinity>() == 0.0) {
      result.status = SolveStatus::kLineSearch;
      break;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-16 * y.squaredNorm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (static_cast<int>(s_hist.size()) > spec.history_size) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    const double decrease = (fx - f_new) / std::max({std::abs(fx), std::abs(f_new), 1.0});
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (decrease <= spec.convergence_factor) {
      // Stale curvature pairs can stall progress; retry once from a fresh history.
      if (!s_hist.empty() && !restarted) {
        restarted = true;
        s_hist.clear();
        y_hist.clear();
        continue;
      }
      result.status = SolveStatus::kDecrease;
      break;
    }
    restarted = false;
  }
  result.w = std::move(x);
  result.value = fx;
  result.projected_gradient = projected_gradient_norm(result.w, g);
  return result;
}

// ---------------------------------------------------------------------------

double softplus_neg(double x) noexcept {
  // log(1 + e^{-x})
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

double log_sum_exp_neg(const Eigen::VectorXd& rho) {
  if (rho.size() == 0) return -std::numeric_limits<double>::infinity();
  const double shift = (-rho).maxCoeff();
  return shift + std::log((-rho.array() - shift).exp().sum());
}

Eigen::VectorXd kkt_weights_exp(const Eigen::VectorXd& rho) {
  if (rho.size() == 0) return {};
  const double shift = (-rho).maxCoeff();
  Eigen::VectorXd u = (-rho.array() - shift).exp().matrix();
  u /= u.sum();
  return u;
}

Eigen::VectorXd kkt_weights_logistic(const Eigen::VectorXd& rho, std::size_t m, int k) {
  const double c = 1.0 / (static_cast<double>(m) * k);
  Eigen::VectorXd u(rho.size());
  for (Eigen::Index q = 0; q < rho.size(); ++q) {
    // e^{-x} / (1 + e^{-x}) = 1 / (1 + e^{x})
    const double x = rho[q];
    u[q] = c * (x >= 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x)));
  }
  return u;
}

Loss Loss::exp_logsum() { return Loss(LossKind::kExpLogSum, 1.0); }

Loss Loss::logistic(std::size_t m, int k) {
  if (m == 0 || k < 1) throw InvalidArgument("logistic loss needs m >= 1 and k >= 1");
  return Loss(LossKind::kLogistic, 1.0 / (static_cast<double>(m) * k));
}

std::string Loss::id() const { return kind_ == LossKind::kExpLogSum ? "exp-logsum" : "logistic"; }

double Loss::value(const Eigen::VectorXd& rho) const {
  if (kind_ == LossKind::kExpLogSum) return log_sum_exp_neg(rho);
  double total = 0.0;
  for (Eigen::Index q = 0; q < rho.size(); ++q) total += softplus_neg(rho[q]);
  return normalizer_ * total;
}

Eigen::VectorXd Loss::kkt_weights(const Eigen::VectorXd& rho) const {
  if (kind_ == LossKind::kExpLogSum) return kkt_weights_exp(rho);
  Eigen::VectorXd u = kkt_weights_logistic(rho, 1, 1);
  return normalizer_ * u;
}

double Loss::conjugate(const Eigen::VectorXd& u) const {
  const auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  double total = 0.0;
  if (kind_ == LossKind::kExpLogSum) {
    for (Eigen::Index q = 0; q < u.size(); ++q) total += xlogx(u[q]);
    return total;
  }
  for (Eigen::Index q = 0; q < u.size(); ++q) {
    const double p = u[q] / normalizer_;
    total += xlogx(p) + xlogx(1.0 - p);
  }
  return normalizer_ * total;
}

const std::vector<LossInfo>& conjugate_loss_table() {
  static const std::vector<LossInfo> table = {
      {"exp-logsum", "shannon-entropy"},
      {"logistic", "binary-entropy"},
  };
  return table;
}

Loss make_loss(const std::string& id, std::size_t m, int k) {
  if (id == "exp-logsum" || id == "exp") return Loss::exp_logsum();
  if (id == "logistic") return Loss::logistic(m, k);
  throw InvalidArgument("unknown loss '" + id + "'");
}

Objective regularized_objective(const Loss& loss, const Eigen::MatrixXd& A, double nu) {
  return [loss, &A, nu](const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
    const Eigen::VectorXd rho = A * w;
    const Eigen::VectorXd u = loss.kkt_weights(rho);
    grad.noalias() = -(A.transpose() * u);
    grad.array() += nu;
    return loss.value(rho) + nu * w.sum();
  };
}

namespace {

ValueGradient evaluate(const Loss& loss, const Eigen::VectorXd& w, const Eigen::MatrixXd& A,
                       double nu) {
  if (A.cols() != w.size()) throw InvalidArgument("objective: w length does not match columns");
  ValueGradient out;
  out.gradient.resize(w.size());
  out.value = regularized_objective(loss, A, nu)(w, out.gradient);
  return out;
}

}  // namespace

ValueGradient exp_logsum_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& dH,
                                   double nu) {
  return evaluate(Loss::exp_logsum(), w, dH, nu);
}

ValueGradient logistic_mean_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& A,
                                      double nu, std::size_t m, int k) {
  return evaluate(Loss::logistic(m, k), w, A, nu);
}

}  // namespace rboost
