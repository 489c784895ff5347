#include "rboost_cli/cli.hpp"

#include <algorithm>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rboost/error.hpp"
#include "rboost/parallel.hpp"

namespace rboost::cli {

namespace {

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed for projections, splits and sampling");
  app->add_option("--threads", c.threads, "Worker thread cap (0 = hardware concurrency)");
  app->add_option("--report", c.report, "Also write a JSON report to this path");
  app->add_flag("--timings", c.timings, "Include wall-time columns");
}

void add_train_options(CLI::App* app, TrainConfig& t) {
  app->add_option("data", t.data, "Training data (.csv or LIBSVM)")->required()->check(CLI::ExistingFile);
  app->add_option("--algo", t.algo)->required()->check(CLI::IsMember({"rank-stagewise", "rank-tc", "proj"}));
  app->add_option("--n", t.n, "Projection dimension")->check(CLI::PositiveNumber);
  app->add_option("--T", t.T, "Maximum number of weak learners")->check(CLI::PositiveNumber);
  app->add_option("--nu", t.nu, "Regularisation weight");
  app->add_option("--epsilon", t.epsilon, "Slack of the rank-tc stop test");
  app->add_option("--eps-rel", t.eps_rel, "Relative objective decrease that stops proj");
  app->add_option("--loss", t.loss)->check(CLI::IsMember({"exp-logsum", "exp", "logistic"}));
  app->add_option("--mode", t.mode, "Stage-wise coefficient rule")->check(CLI::IsMember({"discrete", "real"}));
  app->add_option("--weak", t.weak)->check(CLI::IsMember({"stump", "wlda"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-class boosting with per-class random projections", "rboost"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RBOOST_VERSION_STRING));

  Common common;
  GenConfig gen;
  TrainConfig train;
  EvalConfig eval;
  CvConfig cv;
  VerifyConfig verify;
  ScalingConfig scaling;

  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  add_common(gen_cmd, common);
  gen_cmd->add_option("--kind", gen.kind)->check(CLI::IsMember({"toy", "blobs"}));
  gen_cmd->add_option("--per-class", gen.per_class)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k", gen.k, "Classes (blobs)")->check(CLI::Range(2, 1 << 20));
  gen_cmd->add_option("--d", gen.d, "Features (blobs)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--separation", gen.separation, "Spread of blob means");
  gen_cmd->add_option("--format", gen.format)->check(CLI::IsMember({"csv", "libsvm"}));
  gen_cmd->add_option("-o,--output", gen.output)->required();

  auto* train_cmd = app.add_subcommand("train", "Train a model");
  add_common(train_cmd, common);
  add_train_options(train_cmd, train);
  train_cmd->add_option("--model", train.model, "Output model path");
  train_cmd->add_option("--test", train.test, "Held-out data to evaluate after training")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--holdout", train.holdout, "Stratified test fraction split off the data")
      ->check(CLI::Range(0.0, 0.95));

  auto* predict_cmd = app.add_subcommand("predict", "Print predicted labels");
  add_common(predict_cmd, common);
  predict_cmd->add_option("--model", eval.model)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("data", eval.data)->required()->check(CLI::ExistingFile);
  predict_cmd->add_flag("--scores", eval.scores, "Also print per-class scores");

  auto* eval_cmd = app.add_subcommand("eval", "Error rate and confusion counts");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--model", eval.model)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("data", eval.data)->required()->check(CLI::ExistingFile);

  auto* cv_cmd = app.add_subcommand("cv", "Pick nu by stratified cross-validation");
  add_common(cv_cmd, common);
  add_train_options(cv_cmd, cv.train);
  cv_cmd->add_option("--folds", cv.folds)->check(CLI::Range(2, 1000));
  cv_cmd->add_option("--grid", cv.grid, "Candidate nu values")->delimiter(',');

  auto* verify_cmd = app.add_subcommand("verify", "Monte-Carlo checks of the projection bounds");
  add_common(verify_cmd, common);
  verify_cmd->add_option("op", verify.op)->required()->check(
      CLI::IsMember({"norm", "cosine", "margin", "single-vector"}));
  verify_cmd->add_option("--n", verify.n, "Projection dimension (default: per check, or the threshold implied by --delta)");
  verify_cmd->add_option("--d", verify.d, "Input dimension (norm, cosine)");
  verify_cmd->add_option("--eps", verify.eps)->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--trials", verify.trials);
  verify_cmd->add_option("--k", verify.k, "Classes (margin, single-vector)")->check(CLI::Range(2, 1 << 16));
  verify_cmd->add_option("--per-class", verify.per_class)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--gamma", verify.gamma, "Declared margin");
  verify_cmd->add_option("--delta", verify.delta, "Failure probability for the default n")
      ->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--x-scale", verify.x_scale);
  verify_cmd->add_flag("--identical", verify.identical, "Cosine of a vector with itself");
  verify_cmd->add_flag("--swap", verify.swap, "Exchange the two vectors");

  auto* scaling_cmd = app.add_subcommand("scaling", "Per-iteration timing against n, m and k");
  add_common(scaling_cmd, common);
  scaling_cmd->add_option("--algo", scaling.algo)->check(CLI::IsMember({"rank", "proj"}));
  scaling_cmd->add_option("--n", scaling.ns)->delimiter(',');
  scaling_cmd->add_option("--m", scaling.ms)->delimiter(',');
  scaling_cmd->add_option("--k", scaling.ks)->delimiter(',');
  scaling_cmd->add_option("--d", scaling.d)->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--iters", scaling.iters)->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--repeats", scaling.repeats)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (common.threads) set_max_threads(common.threads);
    if (*train_cmd && train.algo == "rank-tc" && !train.nu) throw UsageError{"--nu is required for rank-tc"};
    if (*cv_cmd && cv.train.algo == "rank-stagewise") throw UsageError{"cv tunes nu; rank-stagewise has no nu"};
    if (*gen_cmd) return cmd_gen(common, gen, out);
    if (*train_cmd) return cmd_train(common, train, out);
    if (*predict_cmd) return cmd_predict(common, eval, out);
    if (*eval_cmd) return cmd_eval(common, eval, out);
    if (*cv_cmd) return cmd_cv(common, cv, out);
    if (*verify_cmd) return cmd_verify(common, verify, out);
    return cmd_scaling(common, scaling, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.message << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace rboost::cli
