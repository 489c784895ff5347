#include "rboost/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rboost/error.hpp"

namespace rboost {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatName = "rboost-model";

Json threshold_to_json(double t) {
  if (std::isinf(t)) return t < 0 ? "-inf" : "+inf";
  return t;
}

double threshold_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    throw DataError("bad threshold '" + s + "'");
  }
  return j.get<double>();
}

Json bank_to_json(const BankDescriptor& b) {
  Json j;
  j["seed"] = b.seed;
  j["k"] = b.k;
  j["rows"] = b.rows;
  j["cols"] = b.cols;
  j["variant"] = to_string(b.variant);
  j["generator"] = b.generator;
  j["version"] = b.version;
  return j;
}

BankDescriptor bank_from_json(const Json& j) {
  BankDescriptor b;
  b.seed = j.at("seed").get<std::uint64_t>();
  b.k = j.at("k").get<int>();
  b.rows = j.at("rows").get<std::size_t>();
  b.cols = j.at("cols").get<std::size_t>();
  b.variant = bank_variant_from_string(j.at("variant").get<std::string>());
  b.generator = j.at("generator").get<std::string>();
  b.version = j.at("version").get<int>();
  return b;
}

Json learners_to_json(const std::vector<WeakHypothesis>& learners) {
  Json arr = Json::array();
  for (const auto& h : learners) {
    Json j;
    j["dim"] = h.stump.dim;
    j["threshold"] = threshold_to_json(h.stump.threshold);
    j["polarity"] = h.stump.polarity;
    if (h.is_linear()) {
      j["dims"] = h.dims;
      j["direction"] = h.direction;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<WeakHypothesis> learners_from_json(const Json& arr) {
  std::vector<WeakHypothesis> out;
  for (const auto& j : arr) {
    WeakHypothesis h;
    h.stump.dim = j.at("dim").get<std::size_t>();
    h.stump.threshold = threshold_from_json(j.at("threshold"));
    h.stump.polarity = j.at("polarity").get<int>();
    if (h.stump.polarity != 1 && h.stump.polarity != -1) throw DataError("polarity must be +1 or -1");
    if (j.contains("direction")) {
      h.dims = j.at("dims").get<std::vector<std::size_t>>();
      h.direction = j.at("direction").get<std::vector<double>>();
      if (h.dims.size() != h.direction.size() || h.direction.empty()) {
        throw DataError("linear learner needs matching non-empty dims and direction");
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

Json header(const char* variant) {
  Json j;
  j["format"] = kFormatName;
  j["version"] = {{"major", kModelFormatMajor}, {"minor", kModelFormatMinor}};
  j["variant"] = variant;
  return j;
}

void check_coefficients(const std::vector<double>& w) {
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("coefficients must be finite and nonnegative");
  }
}

}  // namespace

std::string model_to_json(const RankModel& model) {
  Json j = header("rank");
  j["bank"] = bank_to_json(model.bank);
  j["k"] = model.k;
  j["d"] = model.d;
  j["n"] = model.n;
  j["label_map"] = model.label_map;
  j["learners"] = learners_to_json(model.learners);
  j["w"] = model.w;
  return j.dump(2) + "\n";
}

std::string model_to_json(const ProjModel& model) {
  Json j = header("proj");
  j["bank"] = bank_to_json(model.bank);
  j["k"] = model.k;
  j["d"] = model.d;
  j["n"] = model.n;
  j["T"] = model.T;
  j["label_map"] = model.label_map;
  j["learners"] = learners_to_json(model.learners);
  j["w"] = model.w;
  return j.dump(2) + "\n";
}

std::string model_to_json(const AnyModel& model) {
  return std::visit([](const auto& m) { return model_to_json(m); }, model);
}

AnyModel model_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormatName) throw DataError("not an rboost model file");
    const int major = j.at("version").at("major").get<int>();
    if (major > kModelFormatMajor) {
      throw DataError("model format version " + std::to_string(major) + " is newer than supported (" +
                      std::to_string(kModelFormatMajor) + ")");
    }
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "rank") {
      RankModel m;
      m.bank = bank_from_json(j.at("bank"));
      m.k = j.at("k").get<int>();
      m.d = j.at("d").get<std::size_t>();
      m.n = j.at("n").get<std::size_t>();
      m.label_map = j.at("label_map").get<std::vector<double>>();
      m.learners = learners_from_json(j.at("learners"));
      m.w = j.at("w").get<std::vector<double>>();
      check_coefficients(m.w);
      if (m.w.size() != m.learners.size()) throw DataError("learner and coefficient counts differ");
      if (m.bank.variant != BankVariant::kRank) throw DataError("rank model needs a rank bank");
      return m;
    }
    if (variant == "proj") {
      ProjModel m;
      m.bank = bank_from_json(j.at("bank"));
      m.k = j.at("k").get<int>();
      m.d = j.at("d").get<std::size_t>();
      m.n = j.at("n").get<std::size_t>();
      m.T = j.at("T").get<std::size_t>();
      m.label_map = j.at("label_map").get<std::vector<double>>();
      m.learners = learners_from_json(j.at("learners"));
      m.w = j.at("w").get<std::vector<double>>();
      check_coefficients(m.w);
      if (m.w.size() != m.n) throw DataError("proj model coefficient vector must have length n");
      if (m.bank.variant != BankVariant::kProj) throw DataError("proj model needs a proj bank");
      return m;
    }
    throw DataError("unknown model variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model record: ") + e.what());
  }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw DataError("failed writing " + path.string());
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace rboost
