#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rboost {

/// Outcome of a Monte-Carlo check. Trial t draws everything from stream
/// t + 1 of the master seed, so reports do not depend on thread scheduling.
struct FrequencyReport {
  std::string op;
  std::vector<std::pair<std::string, double>> params;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double empirical_rate = 0.0;
  double theoretical_bound = 0.0;
  std::vector<std::uint8_t> outcomes;  // per trial, 1 = success

  /// bound - 3 sqrt(bound (1 - bound) / trials).
  double three_sigma_floor() const;
};

/// exp(-(n/2)(eps^2/2 - eps^3/3)).
double jl_tail(double n, double eps);

/// 1 - 2 jl_tail(n, eps).
double norm_preservation_bound(double n, double eps);

/// Two-sided interval for the projected cosine given the original cosine.
std::pair<double, double> cosine_interval(double gamma, double eps);

/// Lower bound on the projected multi-class margin.
double margin_preservation_bound(double gamma, double eps);

/// Lower bound on the single-vector pairwise margin.
double single_vector_bound(double gamma, double eps, int k);

/// 12 / (3 eps^2 - 2 eps^3) * ln(6 k m / delta).
double margin_threshold_n(double eps, int k, std::size_t m, double delta);

/// 12 / (3 eps^2 - 2 eps^3) * ln(6 m (k - 1) / delta).
double single_vector_threshold_n(double eps, int k, std::size_t m, double delta);

struct NormCheck {
  std::size_t n = 200;
  std::size_t d = 32;
  double eps = 0.3;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  double x_scale = 1.0;  // multiplies the random unit vector
};

/// Success when (1 - eps) <= |Px|^2 / |x|^2 <= (1 + eps).
FrequencyReport check_norm_preservation(const NormCheck& c);

struct CosineCheck {
  std::size_t n = 400;
  std::size_t d = 32;
  double eps = 0.3;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  bool identical = false;  // use w = x
  bool swap = false;       // exchange the roles of w and x
};

/// Success when the projected cosine lies in cosine_interval(gamma, eps).
/// Pairs with gamma <= 0 are redrawn.
FrequencyReport check_cosine_preservation(const CosineCheck& c);

/// Class coefficient rows W (k x T), weak-output samples H (m x T) and their
/// labels in 1..k.
struct MarginInstance {
  Eigen::MatrixXd W;
  Eigen::MatrixXd H;
  std::vector<int> labels;
};

/// min_i [cos(w_y, H_i) - max_{y' != y} cos(w_y', H_i)].
double multiclass_margin(const MarginInstance& inst);

/// W = identity (k x k), sample i of class y = s_i e_y with s_i in [0.5, 2).
/// Its margin is exactly 1.
MarginInstance one_hot_instance(int k, std::size_t per_class, std::uint64_t seed);

struct MarginCheck {
  std::size_t n = 400;
  double eps = 0.3;
  double gamma = 1.0;  // declared margin, must not exceed the measured one
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

/// Fresh P (n x T) per trial; success when the margin of (P w_r, P H_i) is at
/// least margin_preservation_bound. Bound reported: 1 - 6 k m jl_tail.
FrequencyReport check_margin_preservation(const MarginInstance& inst, const MarginCheck& c);

/// Fresh R (n x kT) per trial, v = R [w_1; ...; w_k], P_y = y-th block of R.
/// Success when every sample and wrong class clears single_vector_bound.
/// Bound reported: 1 - 6 m (k - 1) jl_tail.
FrequencyReport check_single_vector(const MarginInstance& inst, const MarginCheck& c);

}  // namespace rboost
