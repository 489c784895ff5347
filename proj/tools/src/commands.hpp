#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rboost::cli {

/// Settings shared by every command. Echoed in each report header.
struct Common {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool timings = false;
  std::string report;  // optional JSON report path
};

struct GenConfig {
  std::string kind = "toy";  // toy | blobs
  std::size_t per_class = 200;
  int k = 4;
  std::size_t d = 2;
  double separation = 3.0;
  std::string output;
  std::string format;  // csv | libsvm, default from the extension
};

struct TrainConfig {
  std::string data;
  std::string algo;  // rank-stagewise | rank-tc | proj
  std::size_t n = 500;
  std::size_t T = 100;
  std::optional<double> nu;
  double epsilon = 1e-5;
  double eps_rel = 1e-5;
  std::string loss = "exp-logsum";
  std::string mode = "discrete";
  std::string weak = "stump";
  std::string model = "model.json";
  std::string test;
  double holdout = 0.0;
};

struct CvConfig {
  TrainConfig train;
  int folds = 5;
  std::vector<double> grid;
};

struct EvalConfig {
  std::string model;
  std::string data;
  bool scores = false;  // predict only
};

struct VerifyConfig {
  std::string op;  // norm | cosine | margin | single-vector
  std::size_t n = 0;  // 0 = op default or the bound's threshold
  std::size_t d = 32;
  double eps = 0.3;
  std::size_t trials = 0;  // 0 = op default
  int k = 2;
  std::size_t per_class = 5;
  double gamma = 1.0;
  double delta = 0.1;
  double x_scale = 1.0;
  bool identical = false;
  bool swap = false;
};

struct ScalingConfig {
  std::string algo = "rank";  // rank | proj
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms;
  std::vector<int> ks;
  std::size_t d = 10;
  std::size_t iters = 20;
  std::size_t repeats = 3;
};

/// Plain "key: value" pairs printed as "# key: value" header lines.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

int cmd_gen(const Common& c, const GenConfig& g, std::ostream& out);
int cmd_train(const Common& c, const TrainConfig& t, std::ostream& out);
int cmd_predict(const Common& c, const EvalConfig& e, std::ostream& out);
int cmd_eval(const Common& c, const EvalConfig& e, std::ostream& out);
int cmd_cv(const Common& c, const CvConfig& cv, std::ostream& out);
int cmd_verify(const Common& c, const VerifyConfig& v, std::ostream& out);
int cmd_scaling(const Common& c, const ScalingConfig& s, std::ostream& out);

/// Raised for flag combinations that parse but make no sense together.
struct UsageError {
  std::string message;
};

}  // namespace rboost::cli
