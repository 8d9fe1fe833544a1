#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <vector>

#include "enskit/dataset.hpp"
#include "enskit/errors.hpp"
#include "enskit/linear_model.hpp"
#include "enskit/rng.hpp"

using namespace enskit;
namespace fs = std::filesystem;

namespace {

// Exact (bitwise-value) equality for dense matrices.
bool same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("seed derivation separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ull, 1ull, 42ull, 1ull << 60}) {
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
      seen.insert(derive_seed(base, stream));
    }
  }
  CHECK(seen.size() == 32);  // no collisions across bases and streams
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
}

TEST_CASE("rng basics") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  bool saw_zero = false;
  bool saw_max = false;
  for (int i = 0; i < 2000; ++i) {
    const double u = r.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const std::uint64_t k = r.next_below(5);
    CHECK(k < 5);
    saw_zero = saw_zero || k == 0;
    saw_max = saw_max || k == 4;
  }
  CHECK(saw_zero);
  CHECK(saw_max);

  double sum = 0.0;
  double sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = r.next_normal();
    sum += g;
    sq += g * g;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.05));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("blobs: shape, balance, and geometry") {
  const Dataset data = make_blobs(300, 6, 3, 2.0, 0.0, 11);
  CHECK(data.size() == 300);
  CHECK(data.dim() == 6);
  CHECK(data.num_classes == 3);
  CHECK(data.train_idx.size() == 225);
  CHECK(data.test_idx.size() == 75);
  CHECK(std::is_sorted(data.train_idx.begin(), data.train_idx.end()));
  CHECK(std::is_sorted(data.test_idx.begin(), data.test_idx.end()));

  // Balanced labels, classes interleaved by construction.
  std::vector<int> counts(3, 0);
  for (int y : data.labels) ++counts[static_cast<std::size_t>(y)];
  CHECK(counts == std::vector<int>{100, 100, 100});

  // Empirical class means land near (class_sep/sqrt(2)) * e_k: the pairwise
  // distance between any two class means is then class_sep.
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(3, 6);
  for (std::size_t i = 0; i < data.size(); ++i) {
    means.row(data.labels[i]) += data.features.row(static_cast<long>(i));
  }
  means /= 100.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double dist = (means.row(a) - means.row(b)).norm();
      // std 1/3 in 6 dims, 100 points/class: mean estimate sigma ~ 0.033.
      CHECK(dist == doctest::Approx(2.0).epsilon(0.08));
    }
  }
}

TEST_CASE("blobs: determinism and parameter validation") {
  const Dataset a = make_blobs(100, 4, 2, 1.0, 0.2, 5);
  const Dataset b = make_blobs(100, 4, 2, 1.0, 0.2, 5);
  CHECK(same(a.features, b.features));
  CHECK(a.labels == b.labels);
  CHECK(a.train_idx == b.train_idx);
  CHECK(a.test_idx == b.test_idx);

  const Dataset c = make_blobs(100, 4, 2, 1.0, 0.2, 6);
  CHECK_FALSE(same(a.features, c.features));

  CHECK_THROWS_AS(make_blobs(15, 4, 2, 1.0, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(make_blobs(100, 4, 1, 1.0, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(make_blobs(100, 2, 3, 1.0, 0.0, 1), ParameterError);  // k>d
  CHECK_THROWS_AS(make_blobs(100, 4, 2, -1.0, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(make_blobs(100, 4, 2, 1.0, 0.5, 1), ParameterError);
  CHECK_THROWS_AS(make_blobs(100, 4, 2, 1.0, -0.1, 1), ParameterError);
}

TEST_CASE("blobs: label noise flips exactly the advertised count") {
  const Dataset clean = make_blobs(400, 10, 2, 3.0, 0.0, 77);
  const Dataset noisy = make_blobs(400, 10, 2, 3.0, 0.1, 77);
  CHECK(same(clean.features, noisy.features));
  CHECK(clean.train_idx == noisy.train_idx);

  std::set<std::size_t> train(clean.train_idx.begin(), clean.train_idx.end());
  std::size_t flips = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean.labels[i] == noisy.labels[i]) continue;
    ++flips;
    CHECK(train.count(i) == 1);  // flips only ever hit training rows
    CHECK(noisy.labels[i] >= 0);
    CHECK(noisy.labels[i] < 2);
  }
  CHECK(flips == 30);  // round(0.1 * 300)
}

TEST_CASE("dataset csv round trip and parsing") {
  Dataset d;
  d.features = Eigen::MatrixXd{{1.5, -2.25}, {0.1, 1e-3}, {3.0, 4.0},
                               {0.5, 0.25}, {-1.0, 2.0}, {0.0, 0.0},
                               {1.0, 1.0}, {2.0, 2.0}};
  d.labels = {0, 1, 0, 1, 0, 1, 0, 1};
  d.num_classes = 2;
  const fs::path p = fs::temp_directory_path() / "enskit_lab_data.csv";
  save_dataset_csv(d, p);

  const Dataset back = load_dataset_csv(p, 0.25, 9);
  CHECK(back.size() == 8);
  CHECK(back.dim() == 2);
  CHECK(back.labels == d.labels);
  CHECK(same(back.features, d.features));  // shortest round-trip doubles
  CHECK(back.test_idx.size() == 2);    // round(0.25 * 8)
  CHECK(back.train_idx.size() == 6);
  CHECK(back.num_classes == 2);

  // A literal header row is skipped.
  {
    std::ofstream out(p);
    out << "label,f_1,f_2\n1,0.5,0.5\n0,1.5,1.5\n2,2.5,2.5\n0,3.5,3.5\n";
  }
  const Dataset h = load_dataset_csv(p, 0.25, 9);
  CHECK(h.size() == 4);
  CHECK(h.num_classes == 3);

  {
    std::ofstream out(p);
    out << "1,0.5\n0,oops\n";
  }
  CHECK_THROWS_AS(load_dataset_csv(p, 0.5, 1), ParseError);
  {
    std::ofstream out(p);
    out << "1,0.5\n0,0.25,0.5\n";  // inconsistent width
  }
  CHECK_THROWS_AS(load_dataset_csv(p, 0.5, 1), ParseError);
  {
    std::ofstream out(p);
    out << "1,0.5\n0,0.25\n";
  }
  CHECK_THROWS_AS(load_dataset_csv(p, 0.01, 1), ParameterError);  // empty test
  CHECK_THROWS_AS(load_dataset_csv(p, 1.0, 1), ParameterError);
  fs::remove(p);
}

TEST_CASE("relu feature map") {
  const ReluFeatureMap map = make_relu_feature_map(6, 40, 21);
  REQUIRE(map.u.rows() == 40);
  REQUIRE(map.u.cols() == 6);
  for (long i = 0; i < map.u.rows(); ++i) {
    CHECK(map.u.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Zero input maps to zero; a feature direction itself maps to 1 at its
  // own coordinate (u_i . u_i = 1).
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 6);
  CHECK(map.transform(zero).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd z = map.transform(map.u);
  for (long i = 0; i < 40; ++i) {
    CHECK(z(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Features are never negative.
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(30, 6);
  CHECK(map.transform(x).minCoeff() >= 0.0);

  // Determinism + convenience wrapper.
  const ReluFeatureMap again = make_relu_feature_map(6, 40, 21);
  CHECK(same(map.u, again.u));
  CHECK(same(random_relu_features(x, 40, 21), map.transform(x)));
}

TEST_CASE("logistic gradient matches central finite differences") {
  std::mt19937 gen(55);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5, d = 8, k = 3;
    Eigen::MatrixXd z(n, d);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < d; ++j) z(i, j) = normal(gen);
    std::vector<int> y(n);
    for (auto& v : y) v = label(gen);
    Eigen::MatrixXd w(k, d);
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < d; ++j) w(i, j) = 0.5 * normal(gen);
    Eigen::VectorXd b(k);
    for (long i = 0; i < k; ++i) b(i) = 0.5 * normal(gen);
    const double l2 = 1e-3;

    Eigen::MatrixXd gw;
    Eigen::VectorXd gb;
    multinomial_logistic_gradient(z, y, w, b, l2, gw, gb);

    const double h = 1e-6;
    for (long i = 0; i < k; ++i) {
      for (long j = 0; j < d; ++j) {
        Eigen::MatrixXd wp = w, wm = w;
        wp(i, j) += h;
        wm(i, j) -= h;
        const double fd = (multinomial_logistic_loss(z, y, wp, b, l2) -
                           multinomial_logistic_loss(z, y, wm, b, l2)) /
                          (2 * h);
        CHECK(gw(i, j) ==
              doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      }
      Eigen::VectorXd bp = b, bm = b;
      bp(i) += h;
      bm(i) -= h;
      const double fd = (multinomial_logistic_loss(z, y, w, bp, l2) -
                         multinomial_logistic_loss(z, y, w, bm, l2)) /
                        (2 * h);
      CHECK(gb(i) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("logistic fit separates separable data") {
  // Two tight clusters on a line; a couple of hundred iterations suffice.
  Eigen::MatrixXd z(6, 1);
  z << -2.0, -1.9, -2.1, 2.0, 1.9, 2.1;
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  const LinearModel model = fit_multinomial_logistic(z, y, 2);
  CHECK(model.predict(z) == y);
}

TEST_CASE("crushing regularization falls back to the class prior") {
  Eigen::MatrixXd z(4, 2);
  z << 1.0, 0.0, 0.0, 1.0, -1.0, 0.5, 0.25, -0.5;
  const std::vector<int> y = {1, 1, 1, 0};
  LogisticConfig config;
  config.l2_strength = 1e6;  // weights pinned to zero; biases still learn
  const LinearModel model = fit_multinomial_logistic(z, y, 2, config);
  CHECK(model.weights.cwiseAbs().maxCoeff() < 1e-3);
  const std::vector<int> pred = model.predict(z);
  for (int p : pred) CHECK(p == 1);  // the majority class
}

TEST_CASE("logistic fit input validation") {
  Eigen::MatrixXd z(2, 2);
  z << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(fit_multinomial_logistic(z, {0, 5}, 2), LabelRangeError);
  CHECK_THROWS_AS(fit_multinomial_logistic(z, {0, -1}, 2), LabelRangeError);
  CHECK_THROWS_AS(fit_multinomial_logistic(z, {0}, 2), ParameterError);
  z(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_multinomial_logistic(z, {0, 1}, 2), NonFiniteError);
}

TEST_CASE("argmax prediction breaks ties toward the lowest class") {
  LinearModel model;
  model.weights = Eigen::MatrixXd::Zero(3, 2);
  model.biases = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd z(2, 2);
  z << 1.0, 2.0, -3.0, 0.5;
  const std::vector<int> pred = model.predict(z);
  CHECK(pred == std::vector<int>{0, 0});
}
