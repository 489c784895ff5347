#include "rboost/rank_boost.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "rboost/error.hpp"
#include "rboost/random.hpp"

namespace rboost {

namespace {

constexpr double kQFloor = 1e-12;
constexpr double kRealClamp = 1.0 - 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_rank_inputs(const Dataset& train, const ProjectionBank& bank) {
  if (bank.variant() != BankVariant::kRank) throw InvalidArgument("rank training needs a rank-variant bank");
  if (bank.cols() != train.d()) {
    throw InvalidArgument("bank has " + std::to_string(bank.cols()) + " columns but data has d = " +
                          std::to_string(train.d()));
  }
  if (bank.k() != train.k()) {
    throw InvalidArgument("bank has k = " + std::to_string(bank.k()) + " but data has k = " +
                          std::to_string(train.k()));
  }
}

RankModel empty_model(const Dataset& train, const ProjectionBank& bank) {
  RankModel model;
  model.bank = bank.descriptor();
  model.k = train.k();
  model.d = train.d();
  model.n = bank.rows();
  model.label_map.assign(train.original_labels().begin(), train.original_labels().end());
  return model;
}

std::vector<std::size_t> sample_dims(std::size_t n, std::size_t count, std::uint64_t seed,
                                     std::size_t t) {
  std::vector<std::size_t> dims(n);
  std::iota(dims.begin(), dims.end(), 0);
  if (count >= n) return dims;
  CounterRng rng(derive_stream_key(seed ^ 0x3d1aULL, t));
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(dims[i], dims[j]);
  }
  dims.resize(count);
  std::sort(dims.begin(), dims.end());
  return dims;
}

struct Candidate {
  WeakHypothesis h;
  std::vector<int> outputs;
};

Candidate select_candidate(const RankTrainState& st, const Eigen::VectorXd& c,
                           const RankOptions& opts, std::size_t t) {
  const std::span<const double> weights(c.data(), static_cast<std::size_t>(c.size()));
  const StumpFit fit = train_stump(st.points(), weights, st.index());
  Candidate cand;
  cand.h.stump = fit.stump;

  if (opts.weak == WeakKind::kWlda) {
    const auto dims = sample_dims(st.n(), opts.wlda_dims, opts.seed, t);
    Eigen::MatrixXd sub(st.points().rows(), static_cast<Eigen::Index>(dims.size()));
    for (std::size_t j = 0; j < dims.size(); ++j) {
      sub.col(static_cast<Eigen::Index>(j)) = st.points().col(static_cast<Eigen::Index>(dims[j]));
    }
    std::vector<int> signs(static_cast<std::size_t>(c.size()));
    std::vector<double> mags(signs.size());
    for (std::size_t p = 0; p < signs.size(); ++p) {
      signs[p] = c[static_cast<Eigen::Index>(p)] >= 0.0 ? 1 : -1;
      mags[p] = std::abs(c[static_cast<Eigen::Index>(p)]);
    }
    try {
      const WldaFit wf = train_wlda_stump(sub, signs, mags);
      if (wf.score > fit.score) {
        cand.h.stump = wf.stump;
        cand.h.dims = dims;
        cand.h.direction.assign(wf.direction.direction.data(),
                                wf.direction.direction.data() + wf.direction.direction.size());
      }
    } catch (const Error&) {
      // Degenerate weighted scatter: keep the axis stump.
    }
  }
  cand.outputs = st.outputs(cand.h);
  return cand;
}

void add_outputs(Eigen::VectorXd& scores, const std::vector<int>& outputs, double w) {
  for (std::size_t p = 0; p < outputs.size(); ++p) scores[static_cast<Eigen::Index>(p)] += w * outputs[p];
}

}  // namespace

// ---------------------------------------------------------------------------

RankTrainState::RankTrainState(const Dataset& train, const ProjectionBank& bank)
    : m_(train.m()), k_(train.k()), labels_(train.labels().begin(), train.labels().end()) {
  check_rank_inputs(train, bank);
  const auto m = static_cast<Eigen::Index>(m_);
  const auto n = static_cast<Eigen::Index>(bank.rows());
  const auto mk = m * k_;
  points_.resize(mk, n);
  using Strided = Eigen::Map<Eigen::MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  for (int r = 1; r <= k_; ++r) {
    Strided block(points_.data() + (r - 1), m, n, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(mk, k_));
    block.noalias() = train.features() * bank.matrix(r).transpose();
  }
  index_ = build_sort_index(points_);
  scores_ = Eigen::VectorXd::Zero(mk);
  u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(num_pairs()),
                                1.0 / static_cast<double>(num_pairs()));
  rho = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_pairs()));
}

int RankTrainState::pair_class(std::size_t q) const noexcept {
  const int y = labels_[pair_sample(q)];
  const int j = static_cast<int>(q % static_cast<std::size_t>(k_ - 1));
  return j + 1 < y ? j + 1 : j + 2;
}

std::vector<int> RankTrainState::outputs(const WeakHypothesis& h) const {
  std::vector<int> out(num_points());
  if (!h.is_linear()) {
    const auto col = points_.col(static_cast<Eigen::Index>(h.stump.dim));
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = h.stump.evaluate(col[static_cast<Eigen::Index>(p)]);
    return out;
  }
  for (std::size_t p = 0; p < out.size(); ++p) {
    double v = 0.0;
    for (std::size_t j = 0; j < h.dims.size(); ++j) {
      v += h.direction[j] * points_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(h.dims[j]));
    }
    out[p] = h.stump.evaluate(v);
  }
  return out;
}

Eigen::VectorXd RankTrainState::delta_h(const std::vector<int>& outputs) const {
  Eigen::VectorXd dh(static_cast<Eigen::Index>(num_pairs()));
  for (std::size_t q = 0; q < num_pairs(); ++q) {
    const std::size_t i = pair_sample(q);
    dh[static_cast<Eigen::Index>(q)] =
        outputs[point(i, labels_[i])] - outputs[point(i, pair_class(q))];
  }
  return dh;
}

double RankTrainState::train_error() const {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    const int pred = argmax_label(scores_.data() + point(i, 1), k_);
    if (pred != labels_[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(m_);
}

Eigen::VectorXd pairpoint_weights(const Eigen::VectorXd& u, std::span<const int> labels, int k) {
  const std::size_t m = labels.size();
  if (static_cast<std::size_t>(u.size()) != m * static_cast<std::size_t>(k - 1)) {
    throw InvalidArgument("pair weights must have m(k-1) entries");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m * static_cast<std::size_t>(k)));
  for (std::size_t i = 0; i < m; ++i) {
    const int y = labels[i];
    for (int j = 0; j < k - 1; ++j) {
      const int r = j + 1 < y ? j + 1 : j + 2;
      const double uq = u[static_cast<Eigen::Index>(i * static_cast<std::size_t>(k - 1) + static_cast<std::size_t>(j))];
      c[static_cast<Eigen::Index>(i * static_cast<std::size_t>(k) + static_cast<std::size_t>(y - 1))] += uq;
      c[static_cast<Eigen::Index>(i * static_cast<std::size_t>(k) + static_cast<std::size_t>(r - 1))] -= uq;
    }
  }
  return c;
}

Eigen::VectorXd pairpoint_weights(const RankTrainState& state) {
  return pairpoint_weights(state.u, state.labels(), state.k());
}

double stagewise_weight_discrete(double q_plus, double q_minus) {
  const double cap = 0.25 * std::log(1.0 / kQFloor);
  return std::clamp(0.25 * std::log(std::max(q_plus, kQFloor) / std::max(q_minus, kQFloor)), -cap, cap);
}

double stagewise_weight_real(double b) {
  b = std::clamp(b, -kRealClamp, kRealClamp);
  return 0.5 * std::log((1.0 + b) / (1.0 - b));
}

std::string to_string(StagewiseMode m) { return m == StagewiseMode::kDiscrete ? "discrete" : "real"; }

StagewiseMode stagewise_mode_from_string(const std::string& s) {
  if (s == "discrete") return StagewiseMode::kDiscrete;
  if (s == "real") return StagewiseMode::kReal;
  throw InvalidArgument("unknown stage-wise mode '" + s + "'");
}

// ---------------------------------------------------------------------------

RankTrainResult train_stagewise(const Dataset& train, const ProjectionBank& bank,
                                const RankOptions& opts) {
  RankTrainState st(train, bank);
  RankTrainResult result{empty_model(train, bank), {}};
  result.history.stop_reason = "iteration limit";

  for (std::size_t t = 1; t <= opts.T; ++t) {
    const auto start = Clock::now();
    const Eigen::VectorXd c = pairpoint_weights(st);
    Candidate cand = select_candidate(st, c, opts, t);
    const Eigen::VectorXd dh = st.delta_h(cand.outputs);
    const double edge = st.u.dot(dh);
    if (!(edge > 0.0)) {
      result.history.stop_reason = "no weak learner with positive edge";
      break;
    }

    double coef = 0.0;
    if (opts.mode == StagewiseMode::kDiscrete) {
      double q_plus = 0.0;
      double q_minus = 0.0;
      for (Eigen::Index q = 0; q < dh.size(); ++q) {
        if (dh[q] > 0.0) q_plus += st.u[q];
        if (dh[q] < 0.0) q_minus += st.u[q];
      }
      coef = stagewise_weight_discrete(q_plus, q_minus);
    } else {
      // The bound holds for outputs in [-1, 1], so it is applied to dh / 2.
      coef = 0.5 * stagewise_weight_real(edge / 2.0);
    }

    st.rho += coef * dh;
    st.u = kkt_weights_exp(st.rho);
    Eigen::VectorXd scores = st.scores();
    add_outputs(scores, cand.outputs, coef);
    st.set_scores(std::move(scores));

    result.model.learners.push_back(std::move(cand.h));
    result.model.w.push_back(coef);

    IterationRecord rec;
    rec.t = t;
    rec.objective = log_sum_exp_neg(st.rho);
    rec.edge = edge;
    rec.coefficient = coef;
    rec.train_error = st.train_error();
    rec.max_edge = edge;
    rec.duality_gap = std::numeric_limits<double>::quiet_NaN();
    rec.seconds = seconds_since(start);
    result.history.iterations.push_back(rec);
    if (opts.observer) opts.observer(st, rec);
  }
  return result;
}

RankTrainResult train_totally_corrective(const Dataset& train, const ProjectionBank& bank,
                                         const RankOptions& opts) {
  if (!(opts.nu > 0.0)) throw InvalidArgument("totally-corrective training needs nu > 0");
  RankTrainState st(train, bank);
  const Loss loss = make_loss(opts.loss, st.m(), st.k());
  RankTrainResult result{empty_model(train, bank), {}};
  result.history.stop_reason = "iteration limit";

  const auto num_pairs = static_cast<Eigen::Index>(st.num_pairs());
  const auto num_points = static_cast<Eigen::Index>(st.num_points());
  st.u = loss.kkt_weights(st.rho);
  Eigen::MatrixXd dH(num_pairs, 0);
  Eigen::MatrixXd outs(num_points, 0);
  Eigen::VectorXd w(0);

  for (std::size_t t = 1; t <= opts.T; ++t) {
    const auto start = Clock::now();
    const Eigen::VectorXd c = pairpoint_weights(st);
    Candidate cand = select_candidate(st, c, opts, t);
    const Eigen::VectorXd dh = st.delta_h(cand.outputs);
    const double edge = st.u.dot(dh);
    if (edge <= opts.nu + opts.epsilon) {
      result.history.stop_reason = "no violated dual constraint";
      break;
    }

    const auto col = static_cast<Eigen::Index>(t - 1);
    dH.conservativeResize(Eigen::NoChange, col + 1);
    dH.col(col) = dh;
    outs.conservativeResize(Eigen::NoChange, col + 1);
    for (Eigen::Index p = 0; p < num_points; ++p) outs(p, col) = cand.outputs[static_cast<std::size_t>(p)];
    Eigen::VectorXd w0(col + 1);
    w0.head(col) = w;
    w0[col] = 0.0;

    const auto solve_start = Clock::now();
    const SolveResult solved = minimize_bounded(regularized_objective(loss, dH, opts.nu), w0, opts.solver);
    const double solve_seconds = seconds_since(solve_start);
    w = solved.w;
    st.rho = dH * w;
    st.u = loss.kkt_weights(st.rho);
    st.set_scores(outs * w);

    result.model.learners.push_back(std::move(cand.h));

    IterationRecord rec;
    rec.t = t;
    rec.objective = solved.value;
    rec.edge = edge;
    rec.coefficient = w[col];
    rec.train_error = st.train_error();
    rec.max_edge = (dH.transpose() * st.u).maxCoeff();
    rec.duality_gap = solved.value - loss.dual(st.u);
    rec.seconds = seconds_since(start);
    rec.solve_seconds = solve_seconds;
    result.history.iterations.push_back(rec);
    if (opts.observer) opts.observer(st, rec);
    // At a finite optimum u^T rho = nu |w|_1 with u on the simplex, so
    // min rho > nu |w|_1 certifies that w is a descent ray.
    if (loss.kind() == LossKind::kExpLogSum && w.sum() > 0.0 && st.rho.minCoeff() > opts.nu * w.sum()) {
      result.history.stop_reason = "objective unbounded below (nu under the achievable margin)";
      break;
    }
  }
  result.model.w.assign(w.data(), w.data() + w.size());
  return result;
}

// ---------------------------------------------------------------------------

RankScorer::RankScorer(const RankModel& model) : model_(model) {
  init(ProjectionBank(model.bank));
}

RankScorer::RankScorer(const RankModel& model, const ProjectionBank& bank) : model_(model) {
  init(bank);
}

void RankScorer::init(const ProjectionBank& bank) {
  if (model_.learners.size() != model_.w.size()) {
    throw DataError("model has " + std::to_string(model_.learners.size()) + " learners but " +
                    std::to_string(model_.w.size()) + " coefficients");
  }
  if (bank.variant() != BankVariant::kRank || bank.cols() != model_.d ||
      bank.rows() != model_.n || bank.k() != model_.k) {
    throw DataError("bank descriptor does not match the model");
  }
  const auto d = static_cast<Eigen::Index>(model_.d);
  const auto T = static_cast<Eigen::Index>(model_.learners.size());
  for (const auto& h : model_.learners) {
    const std::size_t hi = h.is_linear() ? (h.dims.empty() ? 0 : *std::max_element(h.dims.begin(), h.dims.end()))
                                         : h.stump.dim;
    if (hi >= model_.n || h.dims.size() != h.direction.size()) {
      throw DataError("weak learner refers to a projected dimension outside the bank");
    }
  }
  feature_rows_.clear();
  for (int r = 1; r <= model_.k; ++r) {
    const Eigen::MatrixXd& p = bank.matrix(r);
    Eigen::MatrixXd rows(d, T);
    for (Eigen::Index t = 0; t < T; ++t) {
      const auto& h = model_.learners[static_cast<std::size_t>(t)];
      if (!h.is_linear()) {
        rows.col(t) = p.row(static_cast<Eigen::Index>(h.stump.dim)).transpose();
        continue;
      }
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
      for (std::size_t j = 0; j < h.dims.size(); ++j) {
        acc += h.direction[j] * p.row(static_cast<Eigen::Index>(h.dims[j])).transpose();
      }
      rows.col(t) = acc;
    }
    feature_rows_.push_back(std::move(rows));
  }
}

Eigen::MatrixXd RankScorer::scores(const Eigen::MatrixXd& features) const {
  if (static_cast<std::size_t>(features.cols()) != model_.d) {
    throw InvalidArgument("expected " + std::to_string(model_.d) + " features, got " +
                          std::to_string(features.cols()));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(features.rows(), model_.k);
  for (int r = 0; r < model_.k; ++r) {
    const Eigen::MatrixXd f = features * feature_rows_[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index t = 0; t < f.cols(); ++t) {
        s += model_.w[static_cast<std::size_t>(t)] *
             model_.learners[static_cast<std::size_t>(t)].stump.evaluate(f(i, t));
      }
      out(i, r) = s;
    }
  }
  return out;
}

Prediction RankScorer::predict(std::span<const double> x) const {
  if (x.size() != model_.d) {
    throw InvalidArgument("expected " + std::to_string(model_.d) + " features, got " +
                          std::to_string(x.size()));
  }
  const Eigen::Map<const Eigen::RowVectorXd> row(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::MatrixXd s = scores(Eigen::MatrixXd(row));
  Prediction p;
  p.scores.assign(s.data(), s.data() + s.size());
  p.label = argmax_label(p.scores.data(), model_.k);
  return p;
}

Prediction predict_rank(const RankModel& model, std::span<const double> x) {
  return RankScorer(model).predict(x);
}

}  // namespace rboost
