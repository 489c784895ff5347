#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rboost_cli/cli.hpp"

namespace fs = std::filesystem;
using rboost::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("rboost_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"train"}).code == 1);
  TempDir dir;
  REQUIRE(call({"gen", "--seed", "1", "--per-class", "5", "-o", dir / "toy.csv"}).code == 0);
  const Result r = call({"train", "--algo", "rank-tc", dir / "toy.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--nu") != std::string::npos);
  CHECK(call({"cv", "--algo", "rank-stagewise", dir / "toy.csv"}).code == 1);
}

TEST_CASE("help exits with 0") {
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("train is reproducible byte for byte") {
  TempDir dir;
  REQUIRE(call({"gen", "--seed", "3", "--per-class", "20", "-o", dir / "toy.csv"}).code == 0);
  std::vector<std::string> base{"train", "--algo", "rank-stagewise", "--n", "50", "--T", "30", "--seed", "7"};
  auto a = base;
  a.insert(a.end(), {"--model", dir / "a.json", "--report", dir / "a_report.json", dir / "toy.csv"});
  auto b = base;
  b.insert(b.end(), {"--model", dir / "b.json", "--report", dir / "b_report.json", dir / "toy.csv"});
  const Result ra = call(a);
  const Result rb = call(b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  // Reports differ only in the paths they echo.
  auto strip = [&](std::string s, const std::string& tag) {
    for (const auto& name : std::vector<std::string>{tag + ".json", tag + "_report.json"}) {
      const std::string p = dir / name;
      for (auto pos = s.find(p); pos != std::string::npos; pos = s.find(p)) s.replace(pos, p.size(), "X");
    }
    return s;
  };
  CHECK(strip(ra.out, "a") == strip(rb.out, "b"));
  CHECK(strip(slurp(dir / "a_report.json"), "a") == strip(slurp(dir / "b_report.json"), "b"));
  CHECK(ra.out.find("# rboost ") == 0);
  CHECK(ra.out.find("# algo: rank-stagewise") != std::string::npos);
  CHECK(ra.out.find("# seed: 7") != std::string::npos);
  CHECK(ra.out.find("seconds") == std::string::npos);
}

TEST_CASE("timings are opt-in") {
  TempDir dir;
  REQUIRE(call({"gen", "--per-class", "10", "-o", dir / "toy.csv"}).code == 0);
  const Result r = call({"train", "--algo", "proj", "--n", "20", "--T", "5", "--timings", "--model", dir / "m.json",
                         dir / "toy.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("seconds") != std::string::npos);
}

TEST_CASE("eval, predict and label maps") {
  TempDir dir;
  {
    std::ofstream f(dir / "train.svm");
    f << "7 1:-2 2:0\n7 1:-1.5 2:0.5\n3 1:2 2:0\n3 1:1.5 2:-0.5\n7 1:-2.5 2:0.1\n3 1:2.2 2:0.3\n";
  }
  {
    std::ofstream f(dir / "test.svm");
    f << "3 1:1.8\n7 1:-1.9\n";
  }
  REQUIRE(call({"train", "--algo", "rank-stagewise", "--n", "10", "--T", "10", "--model", dir / "m.json",
                dir / "train.svm"})
              .code == 0);
  const Result e1 = call({"eval", "--model", dir / "m.json", dir / "train.svm"});
  const Result e2 = call({"eval", "--model", dir / "m.json", dir / "train.svm"});
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e2.out);
  CHECK(e1.out.find("error: 0\n") != std::string::npos);
  const Result et = call({"eval", "--model", dir / "m.json", dir / "test.svm"});
  REQUIRE(et.code == 0);
  CHECK(et.out.find("error: 0\n") != std::string::npos);
  const Result p = call({"predict", "--model", dir / "m.json", dir / "test.svm"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("\n3\n7\n") != std::string::npos);
  {
    std::ofstream f(dir / "unknown.svm");
    f << "5 1:1\n";
  }
  CHECK(call({"eval", "--model", dir / "m.json", dir / "unknown.svm"}).code == 2);
}

TEST_CASE("data errors exit with 2") {
  TempDir dir;
  {
    std::ofstream f(dir / "bad.svm");
    f << "1 1:1\nx 1:2\n";
  }
  const Result r = call({"train", "--algo", "proj", dir / "bad.svm"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  {
    std::ofstream f(dir / "newer.json");
    f << "{\"format\": \"rboost-model\", \"version\": {\"major\": 9, \"minor\": 0}}";
  }
  {
    std::ofstream f(dir / "x.svm");
    f << "1 1:1\n2 1:2\n";
  }
  CHECK(call({"eval", "--model", dir / "newer.json", dir / "x.svm"}).code == 2);
}

TEST_CASE("cv picks the smaller nu on ties and rejects tiny sets") {
  TempDir dir;
  REQUIRE(call({"gen", "--seed", "2", "--per-class", "10", "-o", dir / "toy.csv"}).code == 0);
  // Two huge nu values both leave w at zero, so every fold error is identical.
  const Result r = call({"cv", "--algo", "proj", "--n", "10", "--T", "5", "--grid", "20,10", dir / "toy.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("best_nu: 10\n") != std::string::npos);
  {
    std::ofstream f(dir / "four.csv");
    f << "0,1\n1,2\n2,1\n3,2\n";
  }
  CHECK(call({"cv", "--algo", "proj", "--folds", "5", dir / "four.csv"}).code == 2);
}

TEST_CASE("cv fold assignment is seeded") {
  TempDir dir;
  REQUIRE(call({"gen", "--seed", "4", "--per-class", "10", "-o", dir / "toy.csv"}).code == 0);
  std::vector<std::string> args{"cv", "--algo", "rank-tc", "--n", "10", "--T", "5", "--grid", "1e-3,1e-2",
                                "--loss", "logistic", "--seed", "5", dir / "toy.csv"};
  CHECK(call(args).out == call(args).out);
}

TEST_CASE("verify prints a report row") {
  const Result r = call({"verify", "norm", "--trials", "200", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("op\ttrials") != std::string::npos);
  CHECK(call({"verify", "margin", "--gamma", "2", "--trials", "10"}).code == 2);
}

TEST_CASE("scaling runs on a tiny grid") {
  const Result r = call({"scaling", "--algo", "rank", "--n", "20,40", "--m", "20", "--k", "2", "--iters", "3",
                         "--repeats", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("slope_n:") != std::string::npos);
  const Result p = call({"scaling", "--algo", "proj", "--n", "10,20", "--m", "20", "--k", "2", "--iters", "3",
                         "--repeats", "1"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("solver_share") != std::string::npos);
}
