#include "rboost/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "rboost/error.hpp"
#include "rboost/random.hpp"

namespace rboost {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, std::size_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd features, std::vector<int> labels,
                 int num_classes, std::vector<double> original_labels)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      k_(num_classes),
      original_labels_(std::move(original_labels)) {
  if (features_.rows() < 1) throw DataError("dataset has no samples");
  if (features_.cols() < 1) throw DataError("dataset has no features");
  if (k_ < 2) throw DataError("k >= 2 required");
  if (labels_.size() != static_cast<std::size_t>(features_.rows())) {
    throw DataError("label count does not match sample count");
  }
  if (!features_.allFinite()) throw DataError("non-finite feature value");
  for (int y : labels_) {
    if (y < 1 || y > k_) {
      throw DataError("label " + std::to_string(y) + " outside 1.." +
                      std::to_string(k_));
    }
  }
  if (original_labels_.empty()) {
    original_labels_.resize(static_cast<std::size_t>(k_));
    std::iota(original_labels_.begin(), original_labels_.end(), 1.0);
  } else if (original_labels_.size() != static_cast<std::size_t>(k_)) {
    throw DataError("label map size does not match k");
  }
}

Dataset Dataset::from_raw_labels(Eigen::MatrixXd features,
                                 std::span<const double> raw_labels) {
  std::vector<double> map;
  std::vector<int> labels;
  labels.reserve(raw_labels.size());
  for (double v : raw_labels) {
    auto it = std::find(map.begin(), map.end(), v);
    if (it == map.end()) {
      map.push_back(v);
      it = map.end() - 1;
    }
    labels.push_back(static_cast<int>(it - map.begin()) + 1);
  }
  const int k = static_cast<int>(map.size());
  if (!labels.empty() && k < 2) throw DataError("k >= 2 required");
  return Dataset(std::move(features), std::move(labels), k, std::move(map));
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
  for (int y : labels_) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(rows.size()), features_.cols());
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m()) throw InvalidArgument("subset row out of range");
    f.row(static_cast<Eigen::Index>(i)) =
        features_.row(static_cast<Eigen::Index>(rows[i]));
    labels.push_back(labels_[rows[i]]);
  }
  return Dataset(std::move(f), std::move(labels), k_, original_labels_);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.k_ == b.k_ && a.labels_ == b.labels_ &&
         a.original_labels_ == b.original_labels_ &&
         a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
}

// ---------------------------------------------------------------------------
// LIBSVM

Dataset parse_libsvm(std::istream& in) {
  struct Row {
    double label;
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::vector<Row> rows;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;

    Row row;
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < view.size() && (view[pos] == ' ' || view[pos] == '\t')) ++pos;
      const std::size_t start = pos;
      while (pos < view.size() && view[pos] != ' ' && view[pos] != '\t') ++pos;
      return view.substr(start, pos - start);
    };
    const std::string_view label_tok = next_token();
    if (!parse_double(label_tok, row.label) || !std::isfinite(row.label)) {
      throw ParseError(line_no, "non-numeric label '" + std::string(label_tok) + "'");
    }
    std::size_t last_index = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected idx:value, got '" + std::string(tok) + "'");
      }
      std::size_t idx = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), idx) || idx < 1) {
        throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value) || !std::isfinite(value)) {
        throw ParseError(line_no, "bad feature value in '" + std::string(tok) + "'");
      }
      if (idx == last_index) {
        throw ParseError(line_no, "duplicate index " + std::to_string(idx));
      }
      if (idx < last_index) {
        throw ParseError(line_no, "indices not ascending at " + std::to_string(idx));
      }
      last_index = idx;
      dim = std::max(dim, idx);
      row.entries.emplace_back(idx, value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no samples");
  if (dim == 0) throw DataError("no features");

  Eigen::MatrixXd features =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(dim));
  std::vector<double> raw;
  raw.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    raw.push_back(rows[i].label);
    for (const auto& [idx, value] : rows[i].entries) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx - 1)) = value;
    }
  }
  return Dataset::from_raw_labels(std::move(features), raw);
}

Dataset load_libsvm(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_libsvm(in);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  const auto& f = ds.features();
  for (std::size_t i = 0; i < ds.m(); ++i) {
    out << format_double(ds.original_labels()[static_cast<std::size_t>(ds.label(i) - 1)]);
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      const double v = f(static_cast<Eigen::Index>(i), j);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << format_double(v);
    }
    out << '\n';
  }
}

void write_libsvm(const Dataset& ds, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_libsvm(ds, out);
}

// ---------------------------------------------------------------------------
// CSV

Dataset parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view, ',');
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], values[j]) || !std::isfinite(values[j])) {
        numeric = false;
        break;
      }
    }
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) continue;  // header
    }
    if (fields.size() != width) {
      throw ParseError(line_no, "ragged row: expected " + std::to_string(width) +
                                    " fields, got " + std::to_string(fields.size()));
    }
    if (!numeric) throw ParseError(line_no, "non-numeric field");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError("empty table");
  if (width < 2) throw DataError("CSV needs at least one feature and a label column");

  const std::size_t d = width - 1;
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(d));
  std::vector<double> raw;
  raw.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    raw.push_back(rows[i][d]);
  }
  return Dataset::from_raw_labels(std::move(features), raw);
}

Dataset load_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_csv(in);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& f = ds.features();
  for (Eigen::Index j = 0; j < f.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (std::size_t i = 0; i < ds.m(); ++i) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      out << format_double(f(static_cast<Eigen::Index>(i), j)) << ',';
    }
    out << format_double(ds.original_labels()[static_cast<std::size_t>(ds.label(i) - 1)])
        << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_csv(ds, out);
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path);
  return load_libsvm(path);
}

// ---------------------------------------------------------------------------
// Synthetic generators

Dataset gen_diagonal_gaussians(std::size_t per_class, std::uint64_t seed) {
  if (per_class < 1) throw InvalidArgument("per_class must be >= 1");
  constexpr double kMeans[4][2] = {{-3.0, 2.0}, {-3.0, -2.0}, {3.0, 4.0}, {3.0, 0.0}};
  // Cholesky factor of [2.5 1.5; 1.5 1].
  const double l11 = std::sqrt(2.5);
  const double l21 = 1.5 / l11;
  const double l22 = std::sqrt(1.0 - l21 * l21);

  GaussianStream normal(derive_stream_key(seed, 0));
  const auto m = static_cast<Eigen::Index>(4 * per_class);
  Eigen::MatrixXd features(m, 2);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(m));
  Eigen::Index i = 0;
  for (int c = 0; c < 4; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++i) {
      const double z1 = normal.next();
      const double z2 = normal.next();
      features(i, 0) = kMeans[c][0] + l11 * z1;
      features(i, 1) = kMeans[c][1] + l21 * z1 + l22 * z2;
      labels.push_back(c + 1);
    }
  }
  return Dataset(std::move(features), std::move(labels), 4);
}

Dataset gen_gaussian_blobs(int k, std::size_t d, std::size_t per_class,
                           double separation, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k >= 2 required");
  if (d < 1 || per_class < 1) throw InvalidArgument("d and per_class must be >= 1");
  GaussianStream normal(derive_stream_key(seed, 0));
  const auto dim = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd means(k, dim);
  for (int c = 0; c < k; ++c) {
    for (Eigen::Index j = 0; j < dim; ++j) means(c, j) = separation * normal.next();
  }
  const auto m = static_cast<Eigen::Index>(static_cast<std::size_t>(k) * per_class);
  Eigen::MatrixXd features(m, dim);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(m));
  Eigen::Index i = 0;
  for (int c = 0; c < k; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) features(i, j) = means(c, j) + normal.next();
      labels.push_back(c + 1);
    }
  }
  return Dataset(std::move(features), std::move(labels), k);
}

// ---------------------------------------------------------------------------
// Splitting

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must lie in (0, 1)");
  }
  const std::size_t m = ds.m();
  const auto target = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(m)));
  if (target < 1 || target >= m) {
    throw InvalidArgument("split would leave one part empty");
  }

  const int k = ds.k();
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < m; ++i) {
    by_class[static_cast<std::size_t>(ds.label(i) - 1)].push_back(i);
  }
  CounterRng rng(derive_stream_key(spec.seed, 0x5eed5117ULL));
  for (auto& members : by_class) shuffle(members, rng);

  // Largest-remainder apportionment of `target` across classes.
  std::vector<std::size_t> quota(static_cast<std::size_t>(k));
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const double exact = spec.train_fraction * static_cast<double>(by_class[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < target && r < remainders.size(); ++r) {
    const std::size_t c = remainders[r].second;
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    for (std::size_t j = 0; j < by_class[c].size(); ++j) {
      (j < quota[c] ? train_rows : test_rows).push_back(by_class[c][j]);
    }
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {ds.subset(train_rows), ds.subset(test_rows)};
}

std::vector<int> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least 2 folds");
  if (ds.m() < static_cast<std::size_t>(folds)) {
    throw InvalidArgument("fewer samples (" + std::to_string(ds.m()) + ") than folds (" +
                          std::to_string(folds) + ")");
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.k()));
  for (std::size_t i = 0; i < ds.m(); ++i) {
    by_class[static_cast<std::size_t>(ds.label(i) - 1)].push_back(i);
  }
  CounterRng rng(derive_stream_key(seed, 0xf01d5ULL));
  std::vector<int> fold(ds.m(), 0);
  // Deal classes consecutively so fold sizes stay balanced overall.
  std::size_t position = 0;
  for (auto& members : by_class) {
    shuffle(members, rng);
    for (std::size_t i : members) {
      fold[i] = static_cast<int>(position % static_cast<std::size_t>(folds));
      ++position;
    }
  }
  return fold;
}

}  // namespace rboost
