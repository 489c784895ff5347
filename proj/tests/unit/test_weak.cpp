#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "oracles.hpp"
#include "rboost/error.hpp"
#include "rboost/random.hpp"
#include "rboost/weak.hpp"

using namespace rboost;

namespace {

Eigen::MatrixXd random_points(std::size_t n, std::size_t d, std::uint64_t seed, bool discrete = false) {
  GaussianStream g(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = discrete ? std::round(2.0 * g.next()) : g.next();
  }
  return x;
}

std::vector<double> random_weights(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<double> c(n);
  for (auto& v : c) v = g.next();
  return c;
}

}  // namespace

TEST_CASE("sort index: small cases") {
  Eigen::MatrixXd x(3, 2);
  x << 3, 5, 1, 5, 2, 5;
  const SortedIndex idx = build_sort_index(x);
  CHECK(idx.permutation(0) == std::vector<std::size_t>{1, 2, 0});
  CHECK(idx.permutation(1) == std::vector<std::size_t>{0, 1, 2});
  CHECK(idx.ties_next(1, 0));
  CHECK(idx.ties_next(1, 1));
  CHECK_FALSE(idx.ties_next(0, 0));
}

TEST_CASE("sort index: random columns come out sorted") {
  const Eigen::MatrixXd x = random_points(1000, 10, 3, true);
  const SortedIndex idx = build_sort_index(x);
  for (std::size_t c = 0; c < 10; ++c) {
    const auto p = idx.permutation(c);
    for (std::size_t j = 1; j < p.size(); ++j) {
      const double a = x(static_cast<Eigen::Index>(p[j - 1]), static_cast<Eigen::Index>(c));
      const double b = x(static_cast<Eigen::Index>(p[j]), static_cast<Eigen::Index>(c));
      CHECK(a <= b);
      if (a == b) CHECK(p[j - 1] < p[j]);
    }
  }
}

TEST_CASE("stump: separable pair") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  const std::vector<double> c{-1, 1};
  const StumpFit fit = train_stump(x, c, build_sort_index(x));
  CHECK(fit.stump.threshold == 0.5);
  CHECK(fit.stump.polarity == 1);
  CHECK(fit.score == 2.0);
}

TEST_CASE("stump: single point gives a constant stump") {
  Eigen::MatrixXd x(1, 1);
  x << 4.0;
  const std::vector<double> c{-0.7};
  const StumpFit fit = train_stump(x, c, build_sort_index(x));
  CHECK(std::isinf(fit.stump.threshold));
  CHECK(fit.score == doctest::Approx(0.7));
}

TEST_CASE("stump: sign(0) is +1") {
  Stump s{0, 1.0, 1};
  CHECK(s.evaluate(1.0) == 1);
  CHECK(s.evaluate(0.999) == -1);
  s.polarity = -1;
  CHECK(s.evaluate(1.0) == -1);
}

TEST_CASE("stump: all-zero weights are rejected") {
  const Eigen::MatrixXd x = random_points(5, 2, 1);
  const std::vector<double> c(5, 0.0);
  CHECK_THROWS_AS(train_stump(x, c, build_sort_index(x)), InvalidArgument);
}

TEST_CASE("stump: matches brute force on random instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CounterRng rng(seed);
    const std::size_t n = 1 + rng.bounded(60);
    const std::size_t d = 1 + rng.bounded(6);
    const Eigen::MatrixXd x = random_points(n, d, seed * 7, seed % 3 == 0);
    const auto c = random_weights(n, seed * 13);
    const StumpFit fit = train_stump(x, c, build_sort_index(x));
    const auto brute = oracle::brute_force_stump(x, c);
    CHECK(fit.score == brute.score);
    CHECK(stump_score(x, c, fit.stump) == fit.score);
  }
}

TEST_CASE("stump: tie order is lowest dim, lowest threshold, polarity +1") {
  // Two identical columns: the first must win.
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 1, 1, 2, 2, 3, 3;
  const std::vector<double> c{-1, -1, 1, 1};
  const StumpFit fit = train_stump(x, c, build_sort_index(x));
  CHECK(fit.stump.dim == 0);
  CHECK(fit.stump.threshold == 1.5);
  CHECK(fit.stump.polarity == 1);
}

TEST_CASE("stump: sign flip and positive rescaling") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Eigen::MatrixXd x = random_points(40, 3, seed);
    auto c = random_weights(40, seed + 100);
    const SortedIndex idx = build_sort_index(x);
    const StumpFit base = train_stump(x, c, idx);
    std::vector<double> neg(c.size()), scaled(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      neg[i] = -c[i];
      scaled[i] = 4.0 * c[i];
    }
    const StumpFit flipped = train_stump(x, neg, idx);
    CHECK(flipped.score == doctest::Approx(base.score).epsilon(1e-12));
    CHECK(flipped.stump.dim == base.stump.dim);
    CHECK(flipped.stump.threshold == base.stump.threshold);
    CHECK(flipped.stump.polarity == -base.stump.polarity);
    const StumpFit big = train_stump(x, scaled, idx);
    CHECK(big.score == doctest::Approx(4.0 * base.score).epsilon(1e-12));
    CHECK(big.stump == base.stump);
  }
}

TEST_CASE("split threshold stays strictly above the lower value") {
  CHECK(split_threshold(1.0, 2.0) == 1.5);
  const double lo = 1.0;
  const double hi = std::nextafter(1.0, 2.0);
  CHECK(split_threshold(lo, hi) > lo);
  CHECK(split_threshold(lo, hi) <= hi);
}

TEST_CASE("wlda: isotropic blobs give the mean-difference direction") {
  GaussianStream g(5);
  const std::size_t n = 400;
  Eigen::MatrixXd x(n, 3);
  std::vector<int> y(n);
  std::vector<double> w(n, 1.0);
  const Eigen::Vector3d mu1(4, 1, -2), mu2(-1, 0, 3);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 2 ? -1 : 1;
    const Eigen::Vector3d mu = y[i] > 0 ? mu1 : mu2;
    for (int j = 0; j < 3; ++j) x(static_cast<Eigen::Index>(i), j) = mu[j] + 0.5 * g.next();
  }
  const WldaFit fit = train_wlda_stump(x, y, w);
  // Oracle: the same direction from the sample statistics, solved directly.
  Eigen::Vector3d m1 = Eigen::Vector3d::Zero(), m2 = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) (y[i] > 0 ? m1 : m2) += x.row(static_cast<Eigen::Index>(i)).transpose();
  m1 /= n / 2.0;
  m2 /= n / 2.0;
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d z = x.row(static_cast<Eigen::Index>(i)).transpose() - (y[i] > 0 ? m1 : m2);
    s += z * z.transpose() / (n / 2.0);
  }
  const Eigen::Vector3d expect = (s + fit.direction.ridge * Eigen::Matrix3d::Identity()).inverse() * (m1 - m2);
  const Eigen::VectorXd& v = fit.direction.direction;
  const double cosine = v.dot(expect) / (v.norm() * expect.norm());
  CHECK(std::acos(std::min(1.0, cosine)) < 1e-6);
  // Against the population mean difference the angle is small but sampled.
  const Eigen::Vector3d diff = mu1 - mu2;
  CHECK(v.dot(diff) / (v.norm() * diff.norm()) > 0.99);
  CHECK(fit.score == doctest::Approx(400.0));
}

TEST_CASE("wlda: one-sided weights are rejected") {
  const Eigen::MatrixXd x = random_points(6, 2, 3);
  const std::vector<int> y{1, 1, 1, -1, -1, -1};
  const std::vector<double> w{1, 1, 1, 0, 0, 0};
  CHECK_THROWS_AS(train_wlda_stump(x, y, w), InvalidArgument);
}

TEST_CASE("wlda: singular scatter reports a numeric error") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 1, 1, 1, 2, 2, 2, 2;
  const std::vector<int> y{1, 1, -1, -1};
  const std::vector<double> w(4, 1.0);
  CHECK_THROWS_AS(train_wlda_stump(x, y, w), NumericError);
}

TEST_CASE("wlda: correlated blobs beat the best axis stump") {
  GaussianStream g(17);
  const std::size_t n = 300;
  Eigen::MatrixXd x(n, 2);
  std::vector<int> y(n);
  std::vector<double> w(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 2 ? -1 : 1;
    const double a = g.next();
    const double b = 0.3 * g.next();
    // Elongated along (1, 1); the classes are offset along (1, -1).
    const double off = y[i] > 0 ? 0.5 : -0.5;
    x(static_cast<Eigen::Index>(i), 0) = a + b + off;
    x(static_cast<Eigen::Index>(i), 1) = a - b - off;
    w[i] = 0.5 + 0.5 * std::abs(g.next());
    c[i] = y[i] * w[i];
  }
  const WldaFit lda = train_wlda_stump(x, y, w);
  const StumpFit axis = train_stump(x, c, build_sort_index(x));
  CHECK(lda.score >= axis.score);
}

TEST_CASE("weak hypothesis feature") {
  WeakHypothesis h;
  h.stump = {0, 0.0, 1};
  h.dims = {1, 2};
  h.direction = {2.0, -1.0};
  const std::vector<double> z{9.0, 1.0, 3.0};
  CHECK(h.feature(z) == -1.0);
  CHECK(h(z) == -1);
  WeakHypothesis plain;
  plain.stump = {2, 2.5, -1};
  CHECK(plain.feature(z) == 3.0);
  CHECK(plain(z) == -1);
}
