#include "rboost/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rboost/error.hpp"
#include "rboost/parallel.hpp"
#include "rboost/random.hpp"

namespace rboost {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
}

Eigen::VectorXd gaussian_vector(GaussianStream& g, std::size_t d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g.next();
  return v;
}

Eigen::MatrixXd gaussian_projection(GaussianStream& g, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = g.next() * scale;
  }
  return p;
}

// Plain loops so that cos(a, a) evaluates to exactly 1.
double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

FrequencyReport run_trials(std::string op, std::size_t trials, std::uint64_t seed,
                           const std::function<bool(GaussianStream&)>& trial) {
  if (trials == 0) throw InvalidArgument("at least one trial is required");
  FrequencyReport rep;
  rep.op = std::move(op);
  rep.trials = trials;
  rep.outcomes.assign(trials, 0);
  const std::size_t chunks = std::min(trials, 4 * max_threads());
  parallel_for(0, trials, chunks, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t t = b; t < e; ++t) {
      GaussianStream g(derive_stream_key(seed, t + 1));
      rep.outcomes[t] = trial(g) ? 1 : 0;
    }
  });
  rep.successes = static_cast<std::size_t>(std::count(rep.outcomes.begin(), rep.outcomes.end(), 1));
  rep.empirical_rate = static_cast<double>(rep.successes) / static_cast<double>(trials);
  return rep;
}

void validate_instance(const MarginInstance& inst) {
  const auto k = inst.W.rows();
  if (k < 2) throw InvalidArgument("margin instance needs k >= 2");
  if (inst.H.cols() != inst.W.cols()) throw InvalidArgument("W and H must have the same number of columns");
  if (static_cast<std::size_t>(inst.H.rows()) != inst.labels.size() || inst.labels.empty()) {
    throw InvalidArgument("one label per H sample is required");
  }
  for (int y : inst.labels) {
    if (y < 1 || y > k) throw InvalidArgument("label outside 1..k");
  }
}

double margin_of(const std::vector<Eigen::VectorXd>& w_rows, const std::vector<Eigen::VectorXd>& h_rows,
                 const std::vector<int>& labels) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h_rows.size(); ++i) {
    const int y = labels[i];
    const double own = cosine(w_rows[static_cast<std::size_t>(y - 1)], h_rows[i]);
    double other = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < w_rows.size(); ++r) {
      if (static_cast<int>(r) + 1 == y) continue;
      other = std::max(other, cosine(w_rows[r], h_rows[i]));
    }
    margin = std::min(margin, own - other);
  }
  return margin;
}

std::vector<Eigen::VectorXd> rows_of(const Eigen::MatrixXd& m) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

void check_precondition(const MarginInstance& inst, double gamma) {
  const double measured = multiclass_margin(inst);
  if (measured < gamma - 1e-12) {
    throw InvalidArgument("margin precondition fails: measured margin " + std::to_string(measured) +
                          " is below the declared " + std::to_string(gamma));
  }
}

}  // namespace

double FrequencyReport::three_sigma_floor() const {
  const double b = std::clamp(theoretical_bound, 0.0, 1.0);
  return theoretical_bound - 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
}

double jl_tail(double n, double eps) {
  return std::exp(-(n / 2.0) * (eps * eps / 2.0 - eps * eps * eps / 3.0));
}

double norm_preservation_bound(double n, double eps) { return 1.0 - 2.0 * jl_tail(n, eps); }

std::pair<double, double> cosine_interval(double gamma, double eps) {
  const double lo = 1.0 - (1.0 + eps) / (1.0 - eps) * (1.0 - gamma);
  const double hi = 1.0 - std::sqrt(1.0 - eps * eps) / (1.0 + eps) + eps / (1.0 + eps) +
                    (1.0 - eps) / (1.0 + eps) * gamma;
  return {lo, hi};
}

double margin_preservation_bound(double gamma, double eps) {
  return -(1.0 + 3.0 * eps) / (1.0 - eps * eps) + std::sqrt(1.0 - eps * eps) / (1.0 + eps) +
         gamma * (1.0 + eps) / (1.0 - eps);
}

double single_vector_bound(double gamma, double eps, int k) {
  return -2.0 * eps / (1.0 - eps) + gamma * (1.0 + eps) / (std::sqrt(2.0 * k) * (1.0 - eps));
}

double margin_threshold_n(double eps, int k, std::size_t m, double delta) {
  return 12.0 / (3.0 * eps * eps - 2.0 * eps * eps * eps) *
         std::log(6.0 * k * static_cast<double>(m) / delta);
}

double single_vector_threshold_n(double eps, int k, std::size_t m, double delta) {
  return 12.0 / (3.0 * eps * eps - 2.0 * eps * eps * eps) *
         std::log(6.0 * static_cast<double>(m) * (k - 1) / delta);
}

FrequencyReport check_norm_preservation(const NormCheck& c) {
  check_eps(c.eps);
  if (c.n < 1 || c.d < 1) throw InvalidArgument("n and d must be >= 1");
  auto rep = run_trials("norm", c.trials, c.seed, [&](GaussianStream& g) {
    Eigen::VectorXd x = gaussian_vector(g, c.d);
    x *= c.x_scale / std::sqrt(dot(x, x));
    const Eigen::MatrixXd p = gaussian_projection(g, c.n, c.d);
    const Eigen::VectorXd px = p * x;
    const double ratio = dot(px, px) / dot(x, x);
    return ratio >= 1.0 - c.eps && ratio <= 1.0 + c.eps;
  });
  rep.theoretical_bound = norm_preservation_bound(static_cast<double>(c.n), c.eps);
  rep.params = {{"n", static_cast<double>(c.n)}, {"d", static_cast<double>(c.d)}, {"eps", c.eps}};
  return rep;
}

FrequencyReport check_cosine_preservation(const CosineCheck& c) {
  check_eps(c.eps);
  if (c.n < 1 || c.d < 1) throw InvalidArgument("n and d must be >= 1");
  auto rep = run_trials("cosine", c.trials, c.seed, [&](GaussianStream& g) {
    Eigen::VectorXd w;
    Eigen::VectorXd x;
    double gamma = 0.0;
    do {
      w = gaussian_vector(g, c.d);
      x = c.identical ? w : gaussian_vector(g, c.d);
      gamma = cosine(w, x);
    } while (!(gamma > 0.0));
    if (c.swap) std::swap(w, x);
    const Eigen::MatrixXd p = gaussian_projection(g, c.n, c.d);
    const double projected = cosine(p * w, p * x);
    const auto [lo, hi] = cosine_interval(gamma, c.eps);
    return projected >= lo && projected <= hi;
  });
  rep.theoretical_bound = 1.0 - 6.0 * jl_tail(static_cast<double>(c.n), c.eps);
  rep.params = {{"n", static_cast<double>(c.n)}, {"d", static_cast<double>(c.d)}, {"eps", c.eps}};
  return rep;
}

double multiclass_margin(const MarginInstance& inst) {
  validate_instance(inst);
  return margin_of(rows_of(inst.W), rows_of(inst.H), inst.labels);
}

MarginInstance one_hot_instance(int k, std::size_t per_class, std::uint64_t seed) {
  if (k < 2 || per_class < 1) throw InvalidArgument("one-hot instance needs k >= 2 and per_class >= 1");
  MarginInstance inst;
  inst.W = Eigen::MatrixXd::Identity(k, k);
  inst.H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(per_class) * k, k);
  CounterRng rng(derive_stream_key(seed, 0));
  Eigen::Index i = 0;
  for (int y = 1; y <= k; ++y) {
    for (std::size_t s = 0; s < per_class; ++s, ++i) {
      inst.H(i, y - 1) = 0.5 + 1.5 * rng.uniform();
      inst.labels.push_back(y);
    }
  }
  return inst;
}

FrequencyReport check_margin_preservation(const MarginInstance& inst, const MarginCheck& c) {
  check_eps(c.eps);
  check_precondition(inst, c.gamma);
  const auto T = static_cast<std::size_t>(inst.W.cols());
  const auto w_rows = rows_of(inst.W);
  const auto h_rows = rows_of(inst.H);
  const double bound = margin_preservation_bound(c.gamma, c.eps);
  auto rep = run_trials("margin", c.trials, c.seed, [&](GaussianStream& g) {
    const Eigen::MatrixXd p = gaussian_projection(g, c.n, T);
    std::vector<Eigen::VectorXd> pw;
    std::vector<Eigen::VectorXd> ph;
    for (const auto& w : w_rows) pw.emplace_back(p * w);
    for (const auto& h : h_rows) ph.emplace_back(p * h);
    return margin_of(pw, ph, inst.labels) >= bound;
  });
  const int k = static_cast<int>(inst.W.rows());
  const auto m = inst.labels.size();
  rep.theoretical_bound =
      std::max(0.0, 1.0 - 6.0 * k * static_cast<double>(m) * jl_tail(static_cast<double>(c.n), c.eps));
  rep.params = {{"n", static_cast<double>(c.n)}, {"eps", c.eps}, {"gamma", c.gamma},
                {"k", static_cast<double>(k)},   {"m", static_cast<double>(m)}, {"margin_bound", bound}};
  return rep;
}

FrequencyReport check_single_vector(const MarginInstance& inst, const MarginCheck& c) {
  check_eps(c.eps);
  check_precondition(inst, c.gamma);
  const int k = static_cast<int>(inst.W.rows());
  const auto T = inst.W.cols();
  Eigen::MatrixXd W = inst.W;
  W.rowwise().normalize();
  Eigen::VectorXd u(k * T);
  for (int r = 0; r < k; ++r) u.segment(r * T, T) = W.row(r).transpose();
  const auto h_rows = rows_of(inst.H);
  const double bound = single_vector_bound(c.gamma, c.eps, k);

  auto rep = run_trials("single-vector", c.trials, c.seed, [&](GaussianStream& g) {
    const Eigen::MatrixXd R = gaussian_projection(g, c.n, static_cast<std::size_t>(k * T));
    const Eigen::VectorXd v = R * u;
    const double v_norm = std::sqrt(dot(v, v));
    for (std::size_t i = 0; i < h_rows.size(); ++i) {
      const int y = inst.labels[i];
      const Eigen::VectorXd a = R.middleCols((y - 1) * T, T) * h_rows[i];
      for (int r = 1; r <= k; ++r) {
        if (r == y) continue;
        const Eigen::VectorXd b = R.middleCols((r - 1) * T, T) * h_rows[i];
        const double value = (dot(v, a) - dot(v, b)) / (v_norm * std::sqrt(dot(a, a) + dot(b, b)));
        if (!(value >= bound)) return false;
      }
    }
    return true;
  });
  const auto m = inst.labels.size();
  rep.theoretical_bound = std::max(
      0.0, 1.0 - 6.0 * static_cast<double>(m) * (k - 1) * jl_tail(static_cast<double>(c.n), c.eps));
  rep.params = {{"n", static_cast<double>(c.n)}, {"eps", c.eps}, {"gamma", c.gamma},
                {"k", static_cast<double>(k)},   {"m", static_cast<double>(m)}, {"margin_bound", bound}};
  return rep;
}

}  // namespace rboost
