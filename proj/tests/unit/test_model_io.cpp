#include <doctest.h>

#include <filesystem>

#include "rboost/data.hpp"
#include "rboost/error.hpp"
#include "rboost/model_io.hpp"

using namespace rboost;

namespace {

RankModel small_rank() {
  const Dataset ds = gen_gaussian_blobs(3, 2, 6, 1.0, 1);
  const ProjectionBank bank = build_bank(3, 8, 2, 1, BankVariant::kRank);
  RankOptions opts;
  opts.T = 6;
  return train_stagewise(ds, bank, opts).model;
}

ProjModel small_proj() {
  const Dataset ds = gen_gaussian_blobs(3, 2, 6, 1.0, 2);
  const ProjectionBank bank = build_bank(3, 5, 4, 2, BankVariant::kProj);
  return train_proj(ds, bank, {}).model;
}

}  // namespace

TEST_CASE("rank model round-trips byte for byte") {
  RankModel m = small_rank();
  m.learners.push_back({Stump{0, -std::numeric_limits<double>::infinity(), -1}, {}, {}});
  m.w.push_back(0.1);
  m.learners.push_back({Stump{0, 0.25, 1}, {1, 3}, {0.5, -2.0}});
  m.w.push_back(0.2);
  const std::string text = model_to_json(m);
  const AnyModel back = model_from_json(text);
  REQUIRE(std::holds_alternative<RankModel>(back));
  CHECK(std::get<RankModel>(back) == m);
  CHECK(model_to_json(back) == text);
}

TEST_CASE("proj model round-trips") {
  const ProjModel m = small_proj();
  const AnyModel back = model_from_json(model_to_json(m));
  REQUIRE(std::holds_alternative<ProjModel>(back));
  CHECK(std::get<ProjModel>(back) == m);
}

TEST_CASE("field order is canonical") {
  const std::string text = model_to_json(small_rank());
  const auto pos = [&](const char* key) { return text.find(std::string("\"") + key + "\""); };
  CHECK(pos("format") < pos("version"));
  CHECK(pos("version") < pos("variant"));
  CHECK(pos("variant") < pos("bank"));
  CHECK(pos("bank") < pos("learners"));
  CHECK(pos("learners") < pos("\"w"));
}

TEST_CASE("newer major versions and malformed files are refused") {
  std::string text = model_to_json(small_rank());
  const std::string from = "\"major\": 1";
  REQUIRE(text.find(from) != std::string::npos);
  std::string newer = text;
  newer.replace(newer.find(from), from.size(), "\"major\": 2");
  CHECK_THROWS_AS(model_from_json(newer), DataError);
  CHECK_THROWS_AS(model_from_json("{"), DataError);
  CHECK_THROWS_AS(model_from_json("{\"format\": \"other\"}"), DataError);
  std::string minor = text;
  const std::string mfrom = "\"minor\": 0";
  minor.replace(minor.find(mfrom), mfrom.size(), "\"minor\": 7");
  CHECK_NOTHROW(model_from_json(minor));
}

TEST_CASE("save and load") {
  const auto path = std::filesystem::temp_directory_path() / "rboost_model_io_test.json";
  const AnyModel m = small_proj();
  save_model(m, path);
  CHECK(std::get<ProjModel>(load_model(path)) == std::get<ProjModel>(m));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path), DataError);
}
