#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "supnet/pou.hpp"

using namespace supnet;

namespace {

// Random centers in coordinate space plus one query drawn inside the support
// of a chosen center (offset bounded away from the boundary so hats cannot
// round to zero).
struct Setup {
  PartitionOfUnity pou;
  Eigen::MatrixXd centers;
  Eigen::VectorXd values;
};

Setup make_setup(std::uint64_t seed, int count, int dim, double radius) {
  auto eng = testutil::engine(seed);
  Eigen::MatrixXd centers(count, dim);
  Eigen::VectorXd values(count);
  for (int k = 0; k < count; ++k) {
    for (int l = 0; l < dim; ++l) centers(k, l) = testutil::uniform(eng, -1.0, 1.0);
    values[k] = testutil::uniform(eng, -3.0, 3.0);
  }
  return Setup{PartitionOfUnity(centers, radius, values), centers, values};
}

Eigen::VectorXd covered_query(const Eigen::MatrixXd& centers, double radius,
                              std::mt19937_64& eng) {
  int k = static_cast<int>(eng() % centers.rows());
  Eigen::VectorXd y = centers.row(k).transpose();
  for (int l = 0; l < y.size(); ++l) y[l] += testutil::uniform(eng, -0.5, 0.5) * radius / y.size();
  return y;
}

}  // namespace

TEST_CASE("weights are a partition of unity on the covered region") {
  auto eng = testutil::engine(61);
  for (int cfg = 0; cfg < 5; ++cfg) {
    double radius = 0.2 + 0.3 * cfg;
    auto s = make_setup(62 + cfg, 8 + 3 * cfg, 2 + cfg % 3, radius);
    for (int q = 0; q < 200; ++q) {
      Eigen::VectorXd y = covered_query(s.centers, radius, eng);
      Eigen::VectorXd w = s.pou.weights(y);
      REQUIRE(w.size() == s.pou.size());
      CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
      CHECK(w.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("weights vanish exactly outside the supporting ball") {
  auto s = make_setup(63, 10, 3, 0.4);
  auto eng = testutil::engine(64);
  for (int q = 0; q < 200; ++q) {
    Eigen::VectorXd y = covered_query(s.centers, 0.4, eng);
    Eigen::VectorXd w = s.pou.weights(y);
    for (int k = 0; k < s.pou.size(); ++k) {
      double dist = (s.centers.row(k).transpose() - y).norm();
      if (dist >= 0.4) CHECK(w[k] == 0.0);
      if (dist < 0.4 * 0.999) CHECK(w[k] > 0.0);
    }
  }
}

TEST_CASE("the interpolant stays inside the hull of contributing values") {
  auto s = make_setup(65, 12, 2, 0.5);
  auto eng = testutil::engine(66);
  for (int q = 0; q < 200; ++q) {
    Eigen::VectorXd y = covered_query(s.centers, 0.5, eng);
    Eigen::VectorXd w = s.pou.weights(y);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < s.pou.size(); ++k) {
      if (w[k] > 0.0) {
        lo = std::min(lo, s.values[k]);
        hi = std::max(hi, s.values[k]);
      }
    }
    double val = s.pou.interpolant(y);
    CHECK(val >= lo - 1e-12);
    CHECK(val <= hi + 1e-12);
  }
}

TEST_CASE("interpolation reproduces center values at the centers") {
  // Well separated centers: at a center, its own hat is the only nonzero one.
  Eigen::MatrixXd centers(3, 2);
  centers << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd values(3);
  values << 2.0, -1.0, 5.0;
  PartitionOfUnity pou(centers, 0.5, values);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd y = centers.row(k).transpose();
    CHECK(pou.interpolant(y) == values[k]);
  }
}

TEST_CASE("queries outside every bump raise an uncovered error with the gap") {
  Eigen::MatrixXd centers(2, 2);
  centers << 0.0, 0.0, 1.0, 0.0;
  Eigen::VectorXd values(2);
  values << 1.0, 2.0;
  PartitionOfUnity pou(centers, 0.25, values);
  Eigen::VectorXd y(2);
  y << 0.5, 0.0;
  CHECK_FALSE(pou.covered(y));
  CHECK(pou.min_center_distance(y) == doctest::Approx(0.5).epsilon(1e-15));
  try {
    pou.weights(y);
    FAIL("expected an uncovered-point error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::uncovered);
    CHECK(e.detail() == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK_THROWS_AS(pou.interpolant(y), Error);
}

TEST_CASE("boundary points are not covered") {
  Eigen::MatrixXd centers(1, 1);
  centers << 0.0;
  Eigen::VectorXd values(1);
  values << 1.0;
  PartitionOfUnity pou(centers, 0.5, values);
  Eigen::VectorXd y(1);
  y << 0.5;  // distance exactly the radius: the hat is exactly zero
  CHECK_FALSE(pou.covered(y));
  CHECK_THROWS_AS(pou.weights(y), Error);
  y << 0.49;
  CHECK(pou.covered(y));
  CHECK(pou.weights(y)[0] == 1.0);
}

TEST_CASE("mismatched shapes and bad radii are usage errors") {
  Eigen::MatrixXd centers(2, 2);
  centers.setZero();
  Eigen::VectorXd values(3);
  values.setZero();
  CHECK_THROWS_AS(PartitionOfUnity(centers, 0.5, values), Error);
  Eigen::VectorXd ok(2);
  ok.setZero();
  CHECK_THROWS_AS(PartitionOfUnity(centers, 0.0, ok), Error);
  PartitionOfUnity pou(centers, 0.5, ok);
  Eigen::VectorXd wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(pou.weights(wrong), Error);
}
