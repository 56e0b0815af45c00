#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "supnet/cover.hpp"

using namespace supnet;

TEST_CASE("greedy net on three collinear points") {
  auto samples = testutil::scalar_samples({0.0, 1.0, 2.0});

  // radius 1.1: starts at 0, promotes the farthest point 2, then the middle
  // point sits at distance 1 < 1.1 from a center.
  auto net = greedy_net(samples, 1.1);
  REQUIRE(net.center_indices.size() == 2);
  CHECK(net.center_indices[0] == 0);
  CHECK(net.center_indices[1] == 2);
  CHECK(net_coverage_distances(samples, net).maxCoeff() < 1.1);

  // radius 2.5 exceeds the diameter, so the seed point alone suffices.
  auto net2 = greedy_net(samples, 2.5);
  REQUIRE(net2.center_indices.size() == 1);
  CHECK(net2.center_indices[0] == 0);
}

TEST_CASE("exhaustive covering numbers on three collinear points") {
  auto samples = testutil::scalar_samples({0.0, 1.0, 2.0});
  CHECK(covering_number_bruteforce(samples, 1.1) == 1);  // the middle point covers all
  CHECK(covering_number_bruteforce(samples, 0.5) == 3);
  CHECK(covering_number_bruteforce(samples, 2.0) == 1);  // radius = diameter
}

TEST_CASE("covering oracle rejects instances beyond its capacity") {
  std::vector<double> vals(17);
  for (int i = 0; i < 17; ++i) vals[i] = i;
  auto samples = testutil::scalar_samples(vals);
  CHECK_THROWS_AS(covering_number_bruteforce(samples, 1.0), Error);
  try {
    covering_number_bruteforce(samples, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::capacity);
  }
}

TEST_CASE("greedy nets cover and their centers are well separated") {
  auto eng = testutil::engine(31);
  Grid grid{1, 6};
  for (int trial = 0; trial < 20; ++trial) {
    auto samples = testutil::random_samples(grid, 2, 30, eng);
    double diam = 0.0;
    for (int i = 0; i < samples.size(); ++i)
      for (int j = i + 1; j < samples.size(); ++j)
        diam = std::max(diam, prod_dist(samples.points[i], samples.points[j]));
    double radius = 0.3 * diam;
    auto net = greedy_net(samples, radius);
    CHECK(net_coverage_distances(samples, net).maxCoeff() < radius);
    for (std::size_t a = 0; a < net.center_indices.size(); ++a)
      for (std::size_t b = a + 1; b < net.center_indices.size(); ++b)
        CHECK(prod_dist(samples.points[net.center_indices[a]],
                        samples.points[net.center_indices[b]]) >= radius);
  }
}

TEST_CASE("greedy net size is at most the covering number at half radius") {
  auto eng = testutil::engine(32);
  Grid grid{1, 4};
  for (int trial = 0; trial < 20; ++trial) {
    int count = 4 + static_cast<int>(eng() % 7);  // <= 10 keeps the oracle exhaustive
    auto samples = testutil::random_samples(grid, 1, count, eng);
    double diam = 0.0;
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j)
        diam = std::max(diam, prod_dist(samples.points[i], samples.points[j]));
    if (diam == 0.0) continue;
    double radius = 0.5 * diam;
    auto net = greedy_net(samples, radius);
    int oracle = covering_number_bruteforce(samples, radius / 2.0);
    CHECK(static_cast<int>(net.center_indices.size()) <= oracle);
  }
}

TEST_CASE("constant functionals yield a zero envelope and the diameter rule") {
  auto samples = testutil::scalar_samples({0.0, 1.0, 2.0});
  Functional f = [](const ProductPoint&) { return 7.0; };
  auto mod = estimate_modulus(f, samples, 500, 5);
  CHECK(mod.envelope(0.5) == 0.0);
  CHECK(mod.envelope(2.0) == 0.0);
  CHECK(mod.diameter() == doctest::Approx(2.0).epsilon(1e-15));
  // Never crosses any threshold: delta is half the diameter regardless of eps.
  CHECK(choose_delta(mod, 0.01) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(choose_delta(mod, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coincident samples still give a positive delta") {
  auto samples = testutil::scalar_samples({5.0, 5.0, 5.0});
  Functional f = [](const ProductPoint&) { return 1.0; };
  auto mod = estimate_modulus(f, samples, 100, 5);
  CHECK(choose_delta(mod, 0.3) > 0.0);
}

TEST_CASE("linear functional with norm 2 suggests delta near 0.05 at eps 0.6") {
  // Dense line samples t_i = i/1000 in the trivial scalar space; f(x) = 2t
  // is Lipschitz with constant exactly 2, so the envelope is 2*d on every
  // examined pair and the crossing of eps/3 = 0.2 happens at d = 0.1.
  std::vector<double> vals(1001);
  for (int i = 0; i <= 1000; ++i) vals[i] = i / 1000.0;
  auto samples = testutil::scalar_samples(vals);
  Functional f = [](const ProductPoint& x) { return 2.0 * x.mat()(0, 0); };
  auto mod = estimate_modulus(f, samples, 20000, 5);

  double delta = choose_delta(mod, 0.6);
  CHECK(std::abs(delta - 0.05) <= 0.005);

  // With a claimed Lipschitz bound of twice the true constant the classical
  // lower bound (eps/3) / (2 L) must hold with room to spare.
  double claimed_L = 4.0;
  CHECK(delta >= (0.6 / 3.0) / (2.0 * claimed_L));
}

TEST_CASE("choose_delta is strictly positive and nondecreasing in eps") {
  std::vector<double> vals(201);
  for (int i = 0; i <= 200; ++i) vals[i] = i / 200.0;
  auto samples = testutil::scalar_samples(vals);
  Functional f = [](const ProductPoint& x) {
    double t = x.mat()(0, 0);
    return std::sin(3.0 * t) + 0.5 * t;
  };
  auto mod = estimate_modulus(f, samples, 5000, 9);
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    double eps = 0.05 * k;
    double delta = choose_delta(mod, eps);
    CHECK(delta > 0.0);
    CHECK(delta >= prev);
    prev = delta;
  }
}

TEST_CASE("too-sparse sampling for the requested accuracy is reported") {
  auto samples = testutil::scalar_samples({0.0, 1.0});
  Functional f = [](const ProductPoint& x) { return 10.0 * x.mat()(0, 0); };
  auto mod = estimate_modulus(f, samples, 100, 5);
  CHECK_THROWS_WITH_AS(choose_delta(mod, 0.6), "epsilon unattainable at this sampling density",
                       Error);
  try {
    choose_delta(mod, 0.6);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::epsilon_unattainable);
  }
}

TEST_CASE("modulus estimation evaluates the functional once per sample") {
  auto eng = testutil::engine(33);
  auto samples = testutil::random_samples(Grid{1, 5}, 1, 40, eng);
  std::atomic<int> calls{0};
  Functional f = [&calls](const ProductPoint& x) {
    ++calls;
    return x.mat()(0, 0);
  };
  estimate_modulus(f, samples, 1000, 5);
  CHECK(calls.load() == 40);
}

TEST_CASE("modulus tables are deterministic in the seed") {
  auto eng = testutil::engine(34);
  auto samples = testutil::random_samples(Grid{1, 5}, 2, 50, eng);
  Functional f = [](const ProductPoint& x) { return x.mat().sum(); };
  auto a = estimate_modulus(f, samples, 800, 42);
  auto b = estimate_modulus(f, samples, 800, 42);
  REQUIRE(a.table().size() == b.table().size());
  for (std::size_t i = 0; i < a.table().size(); ++i) {
    CHECK(a.table()[i].first == b.table()[i].first);
    CHECK(a.table()[i].second == b.table()[i].second);
  }
  auto c = estimate_modulus(f, samples, 1600, 42);
  CHECK(c.pairs_examined() > a.pairs_examined());
}

TEST_CASE("non-finite functional values raise an evaluation error with the index") {
  auto samples = testutil::scalar_samples({0.0, 1.0, 2.0, 3.0});
  Functional f = [](const ProductPoint& x) {
    double t = x.mat()(0, 0);
    return t == 2.0 ? std::nan("") : t;
  };
  try {
    evaluate_all(f, samples);
    FAIL("expected an evaluation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::evaluation);
    CHECK(e.index() == 2);
  }
}

TEST_CASE("parallel evaluation matches sequential evaluation") {
  auto eng = testutil::engine(35);
  auto samples = testutil::random_samples(Grid{1, 12}, 2, 64, eng);
  Functional f = [](const ProductPoint& x) { return std::cos(x.mat().sum()) + x.mat()(0, 0); };
  Eigen::VectorXd seq = evaluate_all(f, samples, false);
  Eigen::VectorXd par = evaluate_all(f, samples, true);
  CHECK((seq - par).lpNorm<Eigen::Infinity>() == 0.0);
}
