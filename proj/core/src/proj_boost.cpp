#include "rboost/proj_boost.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rboost/error.hpp"
#include "rboost/parallel.hpp"

namespace rboost {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> evaluate_rows(const WeakHypothesis& h, const Eigen::MatrixXd& X) {
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  std::vector<double> row(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) row[static_cast<std::size_t>(j)] = X(i, j);
    out[static_cast<std::size_t>(i)] = h(row);
  }
  return out;
}

struct RowChoice {
  double score = -std::numeric_limits<double>::infinity();
  std::size_t v = 0;
  DimSplit split;
  bool linear = false;
  WldaFit wlda;
};

}  // namespace

ProjTrainState::ProjTrainState(const Dataset& train, const ProjectionBank& bank)
    : train_(&train), bank_(&bank), m_(train.m()), k_(train.k()) {
  if (bank.variant() != BankVariant::kProj) throw InvalidArgument("proj training needs a proj-variant bank");
  if (bank.k() != train.k()) {
    throw InvalidArgument("bank has k = " + std::to_string(bank.k()) + " but data has k = " +
                          std::to_string(train.k()));
  }
  index_ = build_sort_index(train.features());
  const auto pairs = static_cast<Eigen::Index>(num_pairs());
  H_.resize(static_cast<Eigen::Index>(m_), 0);
  A_ = Eigen::MatrixXd::Zero(pairs, static_cast<Eigen::Index>(bank.rows()));
  w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bank.rows()));
  // KKT value of the logistic loss at zero margins.
  u = Eigen::VectorXd::Constant(pairs, 0.5 / (static_cast<double>(m_) * k_));
}

int ProjTrainState::pair_class(std::size_t q) const noexcept {
  const int y = train_->label(pair_sample(q));
  const int j = static_cast<int>(q % static_cast<std::size_t>(k_ - 1));
  return j + 1 < y ? j + 1 : j + 2;
}

Eigen::MatrixXd ProjTrainState::instance_weight_matrix() const {
  if (t() >= T()) throw InvalidArgument("all projection columns are already used");
  const auto m = static_cast<Eigen::Index>(m_);
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(m, k_);
  for (std::size_t q = 0; q < num_pairs(); ++q) {
    const auto i = static_cast<Eigen::Index>(pair_sample(q));
    const double uq = u[static_cast<Eigen::Index>(q)];
    coef(i, train_->label(static_cast<std::size_t>(i)) - 1) += uq;
    coef(i, pair_class(q) - 1) -= uq;
  }
  Eigen::MatrixXd cols(static_cast<Eigen::Index>(n()), k_);
  for (int r = 1; r <= k_; ++r) cols.col(r - 1) = bank_->matrix(r).col(static_cast<Eigen::Index>(t()));
  return coef * cols.transpose();
}

Eigen::VectorXd ProjTrainState::row_instance_weights(std::size_t v) const {
  if (v >= n()) throw InvalidArgument("projection row out of range");
  return instance_weight_matrix().col(static_cast<Eigen::Index>(v));
}

Eigen::VectorXd ProjTrainState::constraint_offsets() const { return A_.transpose() * u; }

void ProjTrainState::append(const std::vector<int>& outputs) {
  if (outputs.size() != m_) throw InvalidArgument("learner outputs must cover every sample");
  if (t() >= T()) throw InvalidArgument("all projection columns are already used");
  const auto col = static_cast<Eigen::Index>(t());
  H_.conservativeResize(Eigen::NoChange, col + 1);
  for (std::size_t i = 0; i < m_; ++i) H_(static_cast<Eigen::Index>(i), col) = outputs[i];

  const auto n_rows = static_cast<Eigen::Index>(n());
  std::vector<Eigen::VectorXd> pcol;
  pcol.reserve(static_cast<std::size_t>(k_));
  for (int r = 1; r <= k_; ++r) pcol.push_back(bank_->matrix(r).col(col));
  for (Eigen::Index v = 0; v < n_rows; ++v) {
    for (std::size_t q = 0; q < num_pairs(); ++q) {
      const std::size_t i = pair_sample(q);
      const int y = train_->label(i);
      const double delta = pcol[static_cast<std::size_t>(y - 1)][v] -
                           pcol[static_cast<std::size_t>(pair_class(q) - 1)][v];
      A_(static_cast<Eigen::Index>(q), v) += delta * outputs[i];
    }
  }
}

Eigen::MatrixXd ProjTrainState::scores() const {
  const auto cols = static_cast<Eigen::Index>(t());
  Eigen::MatrixXd q(cols, k_);
  for (int r = 1; r <= k_; ++r) q.col(r - 1) = bank_->matrix(r).leftCols(cols).transpose() * w;
  return H_ * q;
}

double ProjTrainState::train_error() const {
  return error_rate(scores(), train_->labels());
}

WeakSelection select_weak(const ProjTrainState& state, WeakKind weak) {
  const Eigen::MatrixXd G = state.instance_weight_matrix();
  const Eigen::VectorXd C = state.constraint_offsets();
  const Eigen::MatrixXd& X = state.data().features();
  const std::size_t n = state.n();
  const double slack =
      kTieTolerance * (G.cwiseAbs().colwise().sum().maxCoeff() + C.cwiseAbs().maxCoeff());

  const std::size_t chunks = std::min(n, 4 * max_threads());
  std::vector<RowChoice> chunk_best(chunks);
  parallel_for(0, n, chunks, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t v = b; v < e; ++v) {
      const auto col = G.col(static_cast<Eigen::Index>(v));
      const std::span<const double> g(col.data(), static_cast<std::size_t>(col.size()));
      const double total = col.sum();
      RowChoice choice;
      choice.v = v;
      choice.split = best_split(state.index(), g, total);
      choice.score = C[static_cast<Eigen::Index>(v)] + choice.split.split.score;
      if (weak == WeakKind::kWlda) {
        std::vector<int> signs(g.size());
        std::vector<double> mags(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          signs[i] = g[i] >= 0.0 ? 1 : -1;
          mags[i] = std::abs(g[i]);
        }
        try {
          WldaFit fit = train_wlda_stump(X, signs, mags);
          const double s = C[static_cast<Eigen::Index>(v)] + fit.score;
          if (s > choice.score) {
            choice.score = s;
            choice.linear = true;
            choice.wlda = std::move(fit);
          }
        } catch (const Error&) {
          // Degenerate weighted scatter for this row: keep the axis stump.
        }
      }
      if (choice.score > chunk_best[c].score + slack) chunk_best[c] = std::move(choice);
    }
  });
  RowChoice best;
  for (auto& cb : chunk_best) {
    if (cb.score > best.score + slack) best = std::move(cb);
  }

  WeakSelection sel;
  sel.v = best.v;
  if (best.linear) {
    sel.h.stump = best.wlda.stump;
    sel.h.dims.resize(state.data().d());
    std::iota(sel.h.dims.begin(), sel.h.dims.end(), 0);
    const auto& dir = best.wlda.direction.direction;
    sel.h.direction.assign(dir.data(), dir.data() + dir.size());
  } else {
    sel.h.stump = make_stump(X, state.index(), best.split);
  }
  const std::vector<int> outs = evaluate_rows(sel.h, X);
  double s = 0.0;
  for (std::size_t i = 0; i < outs.size(); ++i) s += G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best.v)) * outs[i];
  sel.score = C[static_cast<Eigen::Index>(best.v)] + s;
  return sel;
}

ProjTrainResult train_proj(const Dataset& train, const ProjectionBank& bank, const ProjOptions& opts) {
  if (!(opts.nu >= 0.0)) throw InvalidArgument("nu must be nonnegative");
  ProjTrainState st(train, bank);
  const Loss loss = Loss::logistic(st.m(), st.k());
  const double constant = std::numbers::ln2 / st.k();

  ProjTrainResult result;
  result.model.bank = bank.descriptor();
  result.model.k = train.k();
  result.model.d = train.d();
  result.model.n = bank.rows();
  result.model.T = bank.cols();
  result.model.label_map.assign(train.original_labels().begin(), train.original_labels().end());
  result.history.stop_reason = "iteration limit";

  double previous = std::numbers::ln2;
  for (std::size_t t = 1; t <= bank.cols(); ++t) {
    const auto start = Clock::now();
    WeakSelection sel = select_weak(st, opts.weak);
    st.append(evaluate_rows(sel.h, train.features()));

    const auto solve_start = Clock::now();
    const SolveResult solved = minimize_bounded(regularized_objective(loss, st.A(), opts.nu), st.w, opts.solver);
    const double solve_seconds = std::chrono::duration<double>(Clock::now() - solve_start).count();
    st.w = solved.w;
    st.u = loss.kkt_weights(st.A() * st.w);
    const double objective = solved.value + constant;
    result.model.learners.push_back(std::move(sel.h));

    IterationRecord rec;
    rec.t = t;
    rec.objective = objective;
    rec.edge = sel.score;
    rec.coefficient = st.w.maxCoeff();
    rec.train_error = st.train_error();
    rec.max_edge = st.constraint_offsets().maxCoeff();
    rec.duality_gap = solved.value - loss.dual(st.u);
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    rec.solve_seconds = solve_seconds;
    result.history.iterations.push_back(rec);
    if (opts.observer) opts.observer(st, rec);

    if (std::abs(previous - objective) / std::abs(previous) < opts.eps_rel) {
      result.history.stop_reason = "relative objective decrease below threshold";
      break;
    }
    previous = objective;
  }
  result.model.w.assign(st.w.data(), st.w.data() + st.w.size());
  return result;
}

// ---------------------------------------------------------------------------

ProjScorer::ProjScorer(const ProjModel& model) : model_(model) { init(ProjectionBank(model.bank)); }

ProjScorer::ProjScorer(const ProjModel& model, const ProjectionBank& bank) : model_(model) { init(bank); }

void ProjScorer::init(const ProjectionBank& bank) {
  if (bank.variant() != BankVariant::kProj || bank.rows() != model_.n || bank.cols() != model_.T ||
      bank.k() != model_.k) {
    throw DataError("bank descriptor does not match the model");
  }
  if (model_.w.size() != model_.n) throw DataError("coefficient vector must have length n");
  if (model_.learners.size() > model_.T) throw DataError("more learners than projection columns");
  for (const auto& h : model_.learners) {
    const bool ok = h.is_linear() ? h.dims.size() == h.direction.size() &&
                                        std::all_of(h.dims.begin(), h.dims.end(),
                                                    [&](std::size_t j) { return j < model_.d; })
                                  : h.stump.dim < model_.d;
    if (!ok) throw DataError("weak learner refers to a feature outside the model dimension");
  }
  const auto cols = static_cast<Eigen::Index>(model_.learners.size());
  const Eigen::Map<const Eigen::VectorXd> w(model_.w.data(), static_cast<Eigen::Index>(model_.w.size()));
  q_.resize(cols, model_.k);
  for (int r = 1; r <= model_.k; ++r) q_.col(r - 1) = bank.matrix(r).leftCols(cols).transpose() * w;
}

Eigen::MatrixXd ProjScorer::scores(const Eigen::MatrixXd& features) const {
  if (static_cast<std::size_t>(features.cols()) != model_.d) {
    throw InvalidArgument("expected " + std::to_string(model_.d) + " features, got " +
                          std::to_string(features.cols()));
  }
  Eigen::MatrixXd h(features.rows(), static_cast<Eigen::Index>(model_.learners.size()));
  for (std::size_t t = 0; t < model_.learners.size(); ++t) {
    const auto outs = evaluate_rows(model_.learners[t], features);
    for (Eigen::Index i = 0; i < features.rows(); ++i) h(i, static_cast<Eigen::Index>(t)) = outs[static_cast<std::size_t>(i)];
  }
  return h * q_;
}

Prediction ProjScorer::predict(std::span<const double> x) const {
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

Prediction predict_proj(const ProjModel& model, std::span<const double> x) {
  return ProjScorer(model).predict(x);
}

}  // namespace rboost
