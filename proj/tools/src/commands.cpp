#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <variant>

#include <json.hpp>

#include "rboost/data.hpp"
#include "rboost/error.hpp"
#include "rboost/metrics.hpp"
#include "rboost/model_io.hpp"
#include "rboost/proj_boost.hpp"
#include "rboost/rank_boost.hpp"
#include "rboost/verify.hpp"
#include "rboost_cli/cli.hpp"
#include "rboost_cli/format.hpp"
#include "rboost_cli/scaling.hpp"

namespace rboost::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

template <typename T>
std::string join_int(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void print_header(std::ostream& out, const std::string& command, const Common& c, const ConfigEcho& echo) {
  out << "# rboost " << RBOOST_VERSION_STRING << "\n";
  out << "# command: " << command << "\n";
  for (const auto& [k, v] : echo) out << "# " << k << ": " << v << "\n";
  out << "# seed: " << c.seed << "\n";
  out << "# threads: " << c.threads << "\n";
}

Json header_json(const std::string& command, const Common& c, const ConfigEcho& echo) {
  Json cfg;
  cfg["version"] = RBOOST_VERSION_STRING;
  cfg["command"] = command;
  for (const auto& [k, v] : echo) cfg[k] = v;
  cfg["seed"] = c.seed;
  cfg["threads"] = c.threads;
  return cfg;
}

void write_report(const Common& c, const Json& j) {
  if (c.report.empty()) return;
  std::ofstream f(c.report, std::ios::binary);
  if (!f) throw DataError("cannot write report '" + c.report + "'");
  f << j.dump(2) << "\n";
}

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

ConfigEcho train_echo(const TrainConfig& t) {
  ConfigEcho e{{"data", t.data}, {"algo", t.algo}, {"n", std::to_string(t.n)}};
  if (t.algo != "proj") e.emplace_back("T", std::to_string(t.T));
  if (t.algo != "rank-stagewise") e.emplace_back("nu", fmt(t.nu.value_or(1e-5)));
  if (t.algo == "rank-tc") {
    e.emplace_back("epsilon", fmt(t.epsilon));
    e.emplace_back("loss", t.loss);
  }
  if (t.algo == "rank-stagewise") e.emplace_back("mode", t.mode);
  if (t.algo == "proj") {
    e.emplace_back("T", std::to_string(t.T));
    e.emplace_back("eps_rel", fmt(t.eps_rel));
  }
  e.emplace_back("weak", t.weak);
  e.emplace_back("holdout", fmt(t.holdout));
  if (!t.test.empty()) e.emplace_back("test", t.test);
  return e;
}

struct Trained {
  AnyModel model;
  TrainHistory history;
};

Trained train_model(const TrainConfig& t, std::uint64_t seed, const Dataset& train) {
  const WeakKind weak = weak_kind_from_string(t.weak);
  if (t.algo == "rank-stagewise" || t.algo == "rank-tc") {
    const ProjectionBank bank = build_bank(train.k(), t.n, train.d(), seed, BankVariant::kRank);
    RankOptions opts;
    opts.T = t.T;
    opts.weak = weak;
    opts.seed = seed;
    if (t.algo == "rank-stagewise") {
      opts.mode = stagewise_mode_from_string(t.mode);
      auto r = train_stagewise(train, bank, opts);
      return {std::move(r.model), std::move(r.history)};
    }
    opts.nu = *t.nu;
    opts.loss = t.loss;
    opts.epsilon = t.epsilon;
    auto r = train_totally_corrective(train, bank, opts);
    return {std::move(r.model), std::move(r.history)};
  }
  const ProjectionBank bank = build_bank(train.k(), t.n, t.T, seed, BankVariant::kProj);
  ProjOptions opts;
  opts.nu = t.nu.value_or(1e-5);
  opts.eps_rel = t.eps_rel;
  opts.weak = weak;
  auto r = train_proj(train, bank, opts);
  return {std::move(r.model), std::move(r.history)};
}

struct ModelView {
  int k;
  std::size_t d;
  std::vector<double> label_map;
};

ModelView view(const AnyModel& m) {
  return std::visit([](const auto& x) { return ModelView{x.k, x.d, x.label_map}; }, m);
}

/// Feature matrix padded with zero columns up to the model dimension.
Eigen::MatrixXd model_features(const ModelView& mv, const Dataset& ds) {
  if (ds.d() > mv.d) {
    throw DataError("dataset has " + std::to_string(ds.d()) + " features, model expects " +
                    std::to_string(mv.d));
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.m()), static_cast<Eigen::Index>(mv.d));
  x.leftCols(static_cast<Eigen::Index>(ds.d())) = ds.features();
  return x;
}

Eigen::MatrixXd model_scores(const AnyModel& m, const Eigen::MatrixXd& x) {
  if (const auto* r = std::get_if<RankModel>(&m)) return RankScorer(*r).scores(x);
  return ProjScorer(std::get<ProjModel>(m)).scores(x);
}

/// Labels of `ds` expressed as model class indices.
std::vector<int> model_labels(const ModelView& mv, const Dataset& ds) {
  std::vector<int> remap;
  for (double raw : ds.original_labels()) {
    const auto it = std::find(mv.label_map.begin(), mv.label_map.end(), raw);
    if (it == mv.label_map.end()) throw DataError("label " + fmt(raw) + " was not seen in training");
    remap.push_back(static_cast<int>(it - mv.label_map.begin()) + 1);
  }
  std::vector<int> out;
  out.reserve(ds.m());
  for (int y : ds.labels()) out.push_back(remap[static_cast<std::size_t>(y - 1)]);
  return out;
}

EvalReport evaluate(const AnyModel& m, const Dataset& ds) {
  const ModelView mv = view(m);
  const auto pred = labels_from_scores(model_scores(m, model_features(mv, ds)));
  const auto truth = model_labels(mv, ds);
  return evaluate_predictions(pred, truth, mv.k);
}

void print_iterations(std::ostream& out, const TrainHistory& h, bool timings) {
  out << "t\tobjective\tedge\tcoefficient\ttrain_error\tmax_edge\tgap";
  if (timings) out << "\tseconds\tsolve_seconds";
  out << "\n";
  for (const auto& it : h.iterations) {
    out << it.t << "\t" << fmt(it.objective) << "\t" << fmt(it.edge) << "\t" << fmt(it.coefficient) << "\t"
        << fmt(it.train_error) << "\t" << fmt(it.max_edge) << "\t" << fmt(it.duality_gap);
    if (timings) out << "\t" << fmt(it.seconds) << "\t" << fmt(it.solve_seconds);
    out << "\n";
  }
}

Json iterations_json(const TrainHistory& h, bool timings) {
  Json arr = Json::array();
  for (const auto& it : h.iterations) {
    Json j;
    j["t"] = it.t;
    j["objective"] = number(it.objective);
    j["edge"] = number(it.edge);
    j["coefficient"] = number(it.coefficient);
    j["train_error"] = it.train_error;
    j["max_edge"] = number(it.max_edge);
    j["duality_gap"] = number(it.duality_gap);
    if (timings) {
      j["seconds"] = it.seconds;
      j["solve_seconds"] = it.solve_seconds;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

void print_eval(std::ostream& out, const EvalReport& rep, const std::vector<double>& label_map) {
  out << "error: " << fmt(rep.error) << "\n";
  out << "samples: " << rep.m << "\n";
  out << "confusion (rows true, columns predicted):\n";
  out << "true\\pred";
  for (double l : label_map) out << "\t" << fmt(l);
  out << "\n";
  for (std::size_t r = 0; r < rep.confusion.size(); ++r) {
    out << fmt(label_map[r]);
    for (std::size_t c = 0; c < rep.confusion[r].size(); ++c) out << "\t" << rep.confusion[r][c];
    out << "\n";
  }
}

Json eval_json(const EvalReport& rep, const std::vector<double>& label_map) {
  Json j;
  j["error"] = rep.error;
  j["samples"] = rep.m;
  j["labels"] = label_map;
  j["confusion"] = rep.confusion;
  return j;
}

std::vector<double> default_grid(const std::string& algo) {
  std::vector<double> g;
  if (algo == "rank-tc") {
    for (int e = -7; e <= -2; ++e) g.push_back(std::pow(10.0, e));
  } else {
    for (int e = -8; e <= -3; ++e) {
      for (double f : {1.0, 2.5, 5.0, 7.5}) g.push_back(f * std::pow(10.0, e));
    }
    g.push_back(1e-2);
  }
  return g;
}

}  // namespace

int cmd_gen(const Common& c, const GenConfig& g, std::ostream& out) {
  Dataset ds = g.kind == "toy" ? gen_diagonal_gaussians(g.per_class, c.seed)
                               : gen_gaussian_blobs(g.k, g.d, g.per_class, g.separation, c.seed);
  std::string format = g.format;
  if (format.empty()) format = std::filesystem::path(g.output).extension() == ".csv" ? "csv" : "libsvm";
  if (format == "csv") {
    write_csv(ds, std::filesystem::path(g.output));
  } else {
    write_libsvm(ds, std::filesystem::path(g.output));
  }
  ConfigEcho echo{{"kind", g.kind}, {"per_class", std::to_string(g.per_class)}};
  if (g.kind == "blobs") {
    echo.emplace_back("k", std::to_string(g.k));
    echo.emplace_back("d", std::to_string(g.d));
    echo.emplace_back("separation", fmt(g.separation));
  }
  echo.emplace_back("output", g.output);
  echo.emplace_back("format", format);
  print_header(out, "gen", c, echo);
  out << "samples: " << ds.m() << "\nfeatures: " << ds.d() << "\nclasses: " << ds.k() << "\n";
  Json j;
  j["config"] = header_json("gen", c, echo);
  j["samples"] = ds.m();
  write_report(c, j);
  return kOk;
}

int cmd_train(const Common& c, const TrainConfig& t, std::ostream& out) {
  const Dataset all = load_dataset(t.data);
  Dataset train = all;
  std::optional<Dataset> test;
  if (!t.test.empty()) {
    test = load_dataset(t.test);
  } else if (t.holdout > 0.0) {
    auto parts = split(all, SplitSpec{1.0 - t.holdout, c.seed});
    train = std::move(parts.first);
    test = std::move(parts.second);
  }
  const ConfigEcho echo = train_echo(t);
  print_header(out, "train", c, echo);
  out << "# model: " << t.model << "\n";
  out << "# train_samples: " << train.m() << "\n";

  const Trained tr = train_model(t, c.seed, train);
  save_model(tr.model, t.model);

  print_iterations(out, tr.history, c.timings);
  const double train_error = tr.history.iterations.empty() ? evaluate(tr.model, train).error
                                                           : tr.history.iterations.back().train_error;
  out << "stop: " << tr.history.stop_reason << "\n";
  out << "iterations: " << tr.history.iterations.size() << "\n";
  out << "train_error: " << fmt(train_error) << "\n";
  Json j;
  Json cfg = header_json("train", c, echo);
  cfg["model"] = t.model;
  j["config"] = cfg;
  j["iterations"] = iterations_json(tr.history, c.timings);
  j["stop_reason"] = tr.history.stop_reason;
  j["train_error"] = train_error;
  if (test) {
    const EvalReport rep = evaluate(tr.model, *test);
    out << "test_error: " << fmt(rep.error) << "\n";
    j["test"] = eval_json(rep, view(tr.model).label_map);
  }
  write_report(c, j);
  return kOk;
}

int cmd_predict(const Common& c, const EvalConfig& e, std::ostream& out) {
  const AnyModel model = load_model(e.model);
  const ModelView mv = view(model);
  const Dataset ds = load_dataset(e.data);
  const Eigen::MatrixXd s = model_scores(model, model_features(mv, ds));
  const auto labels = labels_from_scores(s);
  print_header(out, "predict", c, {{"model", e.model}, {"data", e.data}});
  Json preds = Json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double label = mv.label_map[static_cast<std::size_t>(labels[i] - 1)];
    out << fmt(label);
    if (e.scores) {
      for (Eigen::Index r = 0; r < s.cols(); ++r) out << "\t" << fmt(s(static_cast<Eigen::Index>(i), r));
    }
    out << "\n";
    preds.push_back(label);
  }
  Json j;
  j["config"] = header_json("predict", c, {{"model", e.model}, {"data", e.data}});
  j["predictions"] = preds;
  write_report(c, j);
  return kOk;
}

int cmd_eval(const Common& c, const EvalConfig& e, std::ostream& out) {
  const AnyModel model = load_model(e.model);
  const Dataset ds = load_dataset(e.data);
  const EvalReport rep = evaluate(model, ds);
  const ConfigEcho echo{{"model", e.model}, {"data", e.data}};
  print_header(out, "eval", c, echo);
  print_eval(out, rep, view(model).label_map);
  Json j;
  j["config"] = header_json("eval", c, echo);
  j["result"] = eval_json(rep, view(model).label_map);
  write_report(c, j);
  return kOk;
}

int cmd_cv(const Common& c, const CvConfig& cv, std::ostream& out) {
  if (cv.train.algo == "rank-stagewise") {
    throw UsageError{"cv tunes nu; rank-stagewise has no nu"};
  }
  const Dataset ds = load_dataset(cv.train.data);
  const std::vector<int> fold = stratified_folds(ds, cv.folds, c.seed);
  std::vector<double> grid = cv.grid.empty() ? default_grid(cv.train.algo) : cv.grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  ConfigEcho echo = train_echo(cv.train);
  echo.erase(std::remove_if(echo.begin(), echo.end(), [](const auto& kv) { return kv.first == "nu"; }),
             echo.end());
  echo.emplace_back("folds", std::to_string(cv.folds));
  echo.emplace_back("grid", join(grid));
  print_header(out, "cv", c, echo);

  out << "nu";
  for (int f = 0; f < cv.folds; ++f) out << "\tfold" << f + 1;
  out << "\tmean\n";
  Json rows = Json::array();
  double best_nu = grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double nu : grid) {
    TrainConfig t = cv.train;
    t.nu = nu;
    std::vector<double> errs;
    for (int f = 0; f < cv.folds; ++f) {
      std::vector<std::size_t> tr_rows;
      std::vector<std::size_t> te_rows;
      for (std::size_t i = 0; i < ds.m(); ++i) (fold[i] == f ? te_rows : tr_rows).push_back(i);
      const Dataset tr = ds.subset(tr_rows);
      const Dataset te = ds.subset(te_rows);
      const Trained model = train_model(t, c.seed, tr);
      errs.push_back(evaluate(model.model, te).error);
    }
    double mean = 0.0;
    for (double e : errs) mean += e;
    mean /= static_cast<double>(errs.size());
    out << fmt(nu);
    for (double e : errs) out << "\t" << fmt(e);
    out << "\t" << fmt(mean) << "\n";
    // Ascending grid with a strict comparison keeps the smaller nu on ties.
    if (mean < best_err) {
      best_err = mean;
      best_nu = nu;
    }
    rows.push_back(Json{{"nu", nu}, {"fold_errors", errs}, {"mean", mean}});
  }
  out << "best_nu: " << fmt(best_nu) << "\n";
  out << "best_error: " << fmt(best_err) << "\n";
  Json j;
  j["config"] = header_json("cv", c, echo);
  j["folds"] = rows;
  j["best_nu"] = best_nu;
  j["best_error"] = best_err;
  write_report(c, j);
  return kOk;
}

int cmd_verify(const Common& c, const VerifyConfig& v, std::ostream& out) {
  FrequencyReport rep;
  if (v.op == "norm") {
    NormCheck chk;
    if (v.n) chk.n = v.n;
    chk.d = v.d;
    chk.eps = v.eps;
    if (v.trials) chk.trials = v.trials;
    chk.seed = c.seed;
    chk.x_scale = v.x_scale;
    rep = check_norm_preservation(chk);
  } else if (v.op == "cosine") {
    CosineCheck chk;
    if (v.n) chk.n = v.n;
    chk.d = v.d;
    chk.eps = v.eps;
    if (v.trials) chk.trials = v.trials;
    chk.seed = c.seed;
    chk.identical = v.identical;
    chk.swap = v.swap;
    rep = check_cosine_preservation(chk);
  } else {
    const MarginInstance inst = one_hot_instance(v.k, v.per_class, c.seed);
    MarginCheck chk;
    chk.eps = v.eps;
    chk.gamma = v.gamma;
    if (v.trials) chk.trials = v.trials;
    chk.seed = c.seed;
    const bool single = v.op == "single-vector";
    const std::size_t m = inst.H.rows();
    const double threshold = single ? single_vector_threshold_n(v.eps, v.k, m, v.delta)
                                    : margin_threshold_n(v.eps, v.k, m, v.delta);
    chk.n = v.n ? v.n : static_cast<std::size_t>(std::ceil(threshold));
    rep = single ? check_single_vector(inst, chk) : check_margin_preservation(inst, chk);
  }
  ConfigEcho echo{{"op", rep.op}};
  for (const auto& [k, val] : rep.params) echo.emplace_back(k, fmt(val));
  print_header(out, "verify", c, echo);
  out << "op\ttrials\tsuccesses\tempirical_rate\tbound\tthree_sigma_floor\n";
  out << rep.op << "\t" << rep.trials << "\t" << rep.successes << "\t" << fmt(rep.empirical_rate) << "\t"
      << fmt(rep.theoretical_bound) << "\t" << fmt(rep.three_sigma_floor()) << "\n";
  Json j;
  j["op"] = rep.op;
  Json params = Json::object();
  for (const auto& [k, val] : rep.params) params[k] = val;
  j["params"] = params;
  j["trials"] = rep.trials;
  j["successes"] = rep.successes;
  j["bound"] = rep.theoretical_bound;
  j["config"] = header_json("verify", c, echo);
  write_report(c, j);
  return kOk;
}

int cmd_scaling(const Common& c, const ScalingConfig& s, std::ostream& out) {
  const bool rank = s.algo == "rank";
  const std::vector<std::size_t> ns = s.ns.empty()
      ? (rank ? std::vector<std::size_t>{500, 1000} : std::vector<std::size_t>{250, 500, 1000, 2000})
      : s.ns;
  const std::vector<std::size_t> ms = s.ms.empty()
      ? (rank ? std::vector<std::size_t>{200, 400} : std::vector<std::size_t>{40})
      : s.ms;
  const std::vector<int> ks = s.ks.empty() ? (rank ? std::vector<int>{2, 4} : std::vector<int>{4}) : s.ks;
  ConfigEcho echo{{"algo", s.algo}, {"n", join_int(ns)}, {"m", join_int(ms)}, {"k", join_int(ks)},
                  {"d", std::to_string(s.d)}, {"iters", std::to_string(s.iters)},
                  {"repeats", std::to_string(s.repeats)}};
  print_header(out, "scaling", c, echo);
  out << "n\tm\tk\td\tseconds_per_iteration";
  if (!rank) out << "\tsolver_seconds\tsolver_share";
  out << "\n";
  std::vector<TimingPoint> pts;
  Json rows = Json::array();
  for (int k : ks) {
    for (std::size_t m : ms) {
      for (std::size_t n : ns) {
        const TimingPoint p = rank ? time_rank_iteration(n, m, k, s.d, s.iters, s.repeats, c.seed)
                                   : time_proj_iteration(n, m, k, s.d, s.iters, s.repeats, c.seed);
        out << p.n << "\t" << p.m << "\t" << p.k << "\t" << p.d << "\t" << fmt(p.seconds);
        if (!rank) out << "\t" << fmt(p.solve_seconds) << "\t" << fmt(p.solve_seconds / p.seconds);
        out << "\n";
        rows.push_back(Json{{"n", p.n}, {"m", p.m}, {"k", p.k}, {"d", p.d}, {"seconds", p.seconds},
                            {"solve_seconds", p.solve_seconds}});
        pts.push_back(p);
      }
    }
  }
  Json j;
  j["config"] = header_json("scaling", c, echo);
  j["points"] = rows;
  if (ns.size() >= 2) {
    // Slope over n at the first (m, k) setting.
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> ys;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      x.push_back(static_cast<double>(pts[i].n));
      y.push_back(pts[i].seconds);
      ys.push_back(pts[i].solve_seconds);
    }
    const double slope = loglog_slope(x, y);
    out << "slope_n: " << fmt(slope) << "\n";
    j["slope_n"] = slope;
    if (!rank) {
      const double solver_slope = loglog_slope(x, ys);
      out << "solver_slope_n: " << fmt(solver_slope) << "\n";
      j["solver_slope_n"] = solver_slope;
    }
  }
  if (rank) {
    const double dev = rank_fit_deviation(pts);
    out << "nmk_fit_max_deviation: " << fmt(dev) << "\n";
    j["nmk_fit_max_deviation"] = dev;
  } else {
    const ProjFit fit = fit_proj_model(pts);
    out << "fit_c1: " << fmt(fit.c1) << "\nfit_c2: " << fmt(fit.c2) << "\nfit_max_deviation: "
        << fmt(fit.max_deviation) << "\n";
    j["fit_c1"] = fit.c1;
    j["fit_c2"] = fit.c2;
    j["fit_max_deviation"] = fit.max_deviation;
  }
  write_report(c, j);
  return kOk;
}

}  // namespace rboost::cli
