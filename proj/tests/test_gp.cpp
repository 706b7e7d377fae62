#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <algorithm>

#include "bbo/gp.hpp"

using namespace bbo;

namespace {

Dataset random_dataset(int d, int n, std::uint64_t seed) {
  SeededRng rng(seed);
  Dataset ds;
  while (ds.size() < static_cast<std::size_t>(n)) {
    BinaryVector x = BinaryVector::random(d, rng);
    if (!ds.contains(x)) ds.insert(x, rng.normal() * 3.0 + 1.0);
  }
  return ds;
}

Eigen::MatrixXd dense_kernel(const std::vector<BinaryVector>& points, double gamma,
                             double jitter) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K(i, j) = kernel_value(points[static_cast<std::size_t>(i)],
                             points[static_cast<std::size_t>(j)], gamma);
    }
  }
  K.diagonal().array() += jitter;
  return K;
}

}  // namespace

TEST_CASE("kernel value basics") {
  SeededRng rng(1);
  const BinaryVector a = BinaryVector::random(12, rng);
  CHECK(kernel_value(a, a, 0.7) == 1.0);

  const BinaryVector u = BinaryVector::from_string("0110");
  const BinaryVector v = BinaryVector::from_string("1100");  // distance 2
  CHECK(kernel_value(u, v, 1.0) == doctest::Approx(0.1353352832366127).epsilon(1e-12));

  const BinaryVector w1 = BinaryVector::from_string("0111");  // distance 1 from u
  const BinaryVector w3 = BinaryVector::from_string("1011");  // distance 3 from u
  CHECK(kernel_value(u, w3, 0.4) < kernel_value(u, w1, 0.4));

  CHECK_THROWS_AS(kernel_value(u, BinaryVector::from_string("01"), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_value(u, v, 0.0), std::invalid_argument);
}

TEST_CASE("gamma grid endpoints and monotonicity") {
  const GammaGrid grid = GammaGrid::standard();
  REQUIRE(grid.values.size() == 15);
  CHECK(grid.values.front() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(grid.values.back() == doctest::Approx(std::pow(10.0, 0.5)).epsilon(1e-12));
  CHECK(std::is_sorted(grid.values.begin(), grid.values.end()));
}

TEST_CASE("fit: single observation gives the identity factor") {
  Dataset ds;
  ds.insert(BinaryVector::from_string("0101"), 2.5);
  const GpPosterior post = GpPosterior::fit(ds, 1.0, 0.0);
  CHECK(post.cholesky_factor()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(post.y_offset() == 2.5);

  // with one point the centered response is zero, so the mean reverts to y1
  SeededRng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto pred = post.predict(BinaryVector::random(4, rng));
    CHECK(pred.mean == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(pred.variance >= 0.0);
    CHECK(pred.variance <= 1.0);
  }
}

TEST_CASE("fit: large gamma makes the kernel matrix near-identity") {
  const Dataset ds = random_dataset(10, 15, 3);
  const GpPosterior post = GpPosterior::fit(ds, 10.0, 0.0);
  for (Eigen::Index i = 0; i < post.cholesky_factor().rows(); ++i) {
    CHECK(post.cholesky_factor()(i, i) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("fit: factor reconstructs the kernel matrix") {
  const Dataset ds = random_dataset(10, 30, 4);
  const double gamma = 0.35;
  const double jitter = 1e-8;
  const GpPosterior post = GpPosterior::fit(ds, gamma, jitter);

  const Eigen::MatrixXd expected = dense_kernel(post.training_points(), gamma, post.jitter());
  const Eigen::MatrixXd rebuilt =
      post.cholesky_factor() * post.cholesky_factor().transpose();
  CHECK((rebuilt - expected).norm() / expected.norm() < 1e-8);
}

TEST_CASE("predict: noiseless interpolation at training points") {
  const Dataset ds = random_dataset(10, 25, 5);
  const GpPosterior post = GpPosterior::fit(ds, 0.5, 0.0);
  for (const Observation& obs : ds.observations()) {
    const auto pred = post.predict(obs.point);
    CHECK(pred.mean == doctest::Approx(obs.value).epsilon(1e-6));
    CHECK(pred.variance <= 1e-6);
  }
}

TEST_CASE("predict: two-point closed form oracle") {
  const double gamma = 0.8;
  const BinaryVector x1 = BinaryVector::from_string("00000");
  const BinaryVector x2 = BinaryVector::from_string("00111");  // distance 3
  const double y1 = -4.0, y2 = 2.0;

  Dataset ds;
  ds.insert(x1, y1);
  ds.insert(x2, y2);
  const GpPosterior post = GpPosterior::fit(ds, gamma, 0.0);

  const double rho = std::exp(-gamma * 3.0);
  const double offset = 0.5 * (y1 + y2);
  const double a = y1 - offset;  // centered y = (a, -a)

  SeededRng rng(6);
  for (int i = 0; i < 50; ++i) {
    const BinaryVector x = BinaryVector::random(5, rng);
    const double k1 = kernel_value(x, x1, gamma);
    const double k2 = kernel_value(x, x2, gamma);
    // K^{-1} = [[1,-rho],[-rho,1]] / (1-rho^2)
    const double expected_mean = offset + (k1 - k2) * a / (1.0 - rho);
    const double q = (k1 * k1 + k2 * k2 - 2.0 * rho * k1 * k2) / (1.0 - rho * rho);
    const double expected_var = std::clamp(1.0 - q, 0.0, 1.0);

    const auto pred = post.predict(x);
    CHECK(pred.mean == doctest::Approx(expected_mean).epsilon(1e-9));
    CHECK(pred.variance == doctest::Approx(expected_var).epsilon(1e-9));
  }
}

TEST_CASE("predict agrees with a direct dense-inverse computation") {
  const Dataset ds = random_dataset(8, 12, 7);
  const double gamma = 0.3;
  const double jitter = 1e-8;
  const GpPosterior post = GpPosterior::fit(ds, gamma, jitter);

  const Eigen::MatrixXd K = dense_kernel(post.training_points(), gamma, post.jitter());
  const Eigen::MatrixXd Kinv = K.inverse();
  Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) y(static_cast<Eigen::Index>(i)) = ds[i].value;
  const Eigen::VectorXd yc = y.array() - y.mean();

  SeededRng rng(8);
  for (int i = 0; i < 40; ++i) {
    const BinaryVector x = BinaryVector::random(8, rng);
    Eigen::VectorXd k(static_cast<Eigen::Index>(ds.size()));
    for (std::size_t t = 0; t < ds.size(); ++t) {
      k(static_cast<Eigen::Index>(t)) = kernel_value(x, ds[t].point, gamma);
    }
    const double mean = y.mean() + k.dot(Kinv * yc);
    const double var = std::clamp(1.0 - k.dot(Kinv * k), 0.0, 1.0);
    const auto pred = post.predict(x);
    CHECK(pred.mean == doctest::Approx(mean).epsilon(1e-8));
    CHECK(pred.variance == doctest::Approx(var).epsilon(1e-8));
  }
}

TEST_CASE("log marginal likelihood: single observation") {
  Dataset ds;
  ds.insert(BinaryVector::from_string("0110"), 7.0);
  // centered y = 0, K = [1]: -0.5*log(2*pi)
  CHECK(log_marginal_likelihood(ds, 1.0, 0.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-9));
}

TEST_CASE("log marginal likelihood: permutation invariance") {
  const Dataset ds = random_dataset(10, 20, 9);
  std::vector<Observation> obs(ds.observations());
  std::reverse(obs.begin(), obs.end());
  Dataset reversed;
  for (const auto& o : obs) reversed.insert(o.point, o.value);

  for (double gamma : {0.05, 0.3, 1.0}) {
    const double a = log_marginal_likelihood(ds, gamma, 1e-8);
    const double b = log_marginal_likelihood(reversed, gamma, 1e-8);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("log marginal likelihood: two-point closed form") {
  const int d = 6;
  BinaryVector x1(d);
  BinaryVector x2(d);
  for (int i = 0; i < d; ++i) x2.set(i, true);  // distance d
  Dataset ds;
  ds.insert(x1, 3.0);
  ds.insert(x2, 3.0);  // identical values: centered y = 0

  const double gamma = 2.0;
  const double rho = std::exp(-gamma * d);
  const double expected = -0.5 * std::log(1.0 - rho * rho) - std::log(2.0 * M_PI);
  CHECK(log_marginal_likelihood(ds, gamma, 0.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("select_gamma: degenerate cases and tie-breaks") {
  Dataset single;
  single.insert(BinaryVector::from_string("010"), 1.0);

  GammaGrid one;
  one.values = {0.25};
  CHECK(select_gamma(single, one, 0.0) == 0.25);

  // single observation: likelihood is gamma-independent, smallest gamma wins
  const GammaGrid grid = GammaGrid::standard();
  CHECK(select_gamma(single, grid, 0.0) == grid.values.front());

  // duplicating grid values must not change the choice
  const Dataset ds = random_dataset(8, 15, 10);
  GammaGrid doubled;
  for (double g : grid.values) {
    doubled.values.push_back(g);
    doubled.values.push_back(g);
  }
  CHECK(select_gamma(ds, grid, 1e-8) == select_gamma(ds, doubled, 1e-8));
}

TEST_CASE("select_gamma lands within one grid step of a dense scan") {
  // draw y from a GP with gamma = 0.1 and check the selection is near the
  // dense-scan maximizer
  const int d = 10;
  const int n = 40;
  const double true_gamma = 0.1;
  SeededRng rng(11);
  std::vector<BinaryVector> points;
  Dataset ds;
  while (points.size() < static_cast<std::size_t>(n)) {
    BinaryVector x = BinaryVector::random(d, rng);
    if (!ds.contains(x)) {
      ds.insert(x, 0.0);  // placeholder values, replaced below
      points.push_back(x);
    }
  }
  Eigen::MatrixXd K = dense_kernel(points, true_gamma, 1e-10);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  REQUIRE(llt.info() == Eigen::Success);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  const Eigen::VectorXd y = Eigen::MatrixXd(llt.matrixL()) * z;

  Dataset gp_ds;
  for (int i = 0; i < n; ++i) gp_ds.insert(points[static_cast<std::size_t>(i)], y(i));

  const GammaGrid grid = GammaGrid::standard();
  const double selected = select_gamma(gp_ds, grid, 1e-8);

  const GammaGrid dense = GammaGrid::logarithmic(1e-3, std::pow(10.0, 0.5), 200);
  double best_gamma = dense.values.front();
  double best_ll = -std::numeric_limits<double>::infinity();
  for (double g : dense.values) {
    const double ll = log_marginal_likelihood(gp_ds, g, 1e-8);
    if (ll > best_ll) {
      best_ll = ll;
      best_gamma = g;
    }
  }
  const double grid_step = (std::log10(grid.values.back()) - std::log10(grid.values.front())) /
                           static_cast<double>(grid.values.size() - 1);
  CHECK(std::abs(std::log10(selected) - std::log10(best_gamma)) <= grid_step + 1e-9);
}

TEST_CASE("lcb objective matches predictions and keeps incremental state honest") {
  const Dataset ds = random_dataset(9, 20, 12);
  auto post = std::make_shared<const GpPosterior>(GpPosterior::fit(ds, 0.4, 1e-8));
  const LcbObjective acq(post, 2.5);

  SeededRng rng(13);
  for (int i = 0; i < 30; ++i) {
    const BinaryVector x = BinaryVector::random(9, rng);
    const auto pred = post->predict(x);
    const double expected = pred.mean - 2.5 * std::sqrt(pred.variance);
    CHECK(acq.evaluate(x) == doctest::Approx(expected).epsilon(1e-9));
  }

  // flip deltas against fresh evaluations
  for (int i = 0; i < 30; ++i) {
    const BinaryVector x = BinaryVector::random(9, rng);
    const int k = static_cast<int>(rng.uniform_int(9));
    auto walker = acq.make_walker(x);
    const double expected = acq.evaluate(x.with_flipped(k)) - acq.evaluate(x);
    CHECK(walker->flip_delta(k) == doctest::Approx(expected).epsilon(1e-9));
  }

  // long flip chains stay consistent
  auto walker = acq.make_walker(BinaryVector(9));
  for (int i = 0; i < 400; ++i) walker->flip(static_cast<int>(rng.uniform_int(9)));
  CHECK(walker->value() == doctest::Approx(acq.evaluate(walker->point())).epsilon(1e-9));
}

TEST_CASE("predictive variance stays within [0, 1]") {
  const Dataset ds = random_dataset(10, 35, 14);
  for (double gamma : {0.01, 0.1, 1.0, 3.0}) {
    const GpPosterior post = GpPosterior::fit(ds, gamma, 1e-8);
    SeededRng rng(15);
    for (int i = 0; i < 100; ++i) {
      const auto pred = post.predict(BinaryVector::random(10, rng));
      CHECK(pred.variance >= 0.0);
      CHECK(pred.variance <= 1.0);
    }
  }
}
