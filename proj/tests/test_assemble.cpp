#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "supnet/assemble.hpp"
#include "supnet/demos.hpp"
#include "supnet/project.hpp"

using namespace supnet;

namespace {

FamilySets small_family(std::uint64_t seed) {
  auto spec = FamilySpec::defaults(FamilyKind::fourier_band);
  spec.m = 50;
  return generate_family(spec, 120, 60, 0, seed);
}

}  // namespace

TEST_CASE("lifted measurements reproduce coordinate inner products") {
  auto eng = testutil::engine(101);
  auto samples = testutil::random_samples(Grid{1, 12}, 2, 25, eng);
  auto net = greedy_net(samples, 0.7);
  std::vector<ProductPoint> centers;
  for (int idx : net.center_indices) centers.push_back(samples.points[idx]);
  auto P = build_projector(centers);

  Eigen::MatrixXd freqs(P.dim(), 6);
  for (int j = 0; j < freqs.cols(); ++j)
    for (int l = 0; l < freqs.rows(); ++l) freqs(l, j) = testutil::uniform(eng, -2.0, 2.0);
  auto meas = lift_measurements(P, freqs);
  REQUIRE(meas.size() == 6);

  for (int trial = 0; trial < 40; ++trial) {
    auto x = testutil::random_point(P.grid(), P.n(), eng, 2.0);
    Eigen::VectorXd y = P.coords(x);
    for (int j = 0; j < meas.size(); ++j) {
      double via_rep = meas.phi(j, x);
      double via_coords = freqs.col(j).dot(y);
      CHECK(std::abs(via_rep - via_coords) <= 1e-10 * (1.0 + prod_norm(x)));
    }
  }
}

TEST_CASE("the full pipeline meets its stage budget accounting") {
  auto sets = small_family(7);
  Functional f = integral_functional(PhiKind::product);
  BuildConfig config;
  auto g = build_approximant(f, sets.train, sets.val, 0.2, config, 7);
  const auto& st = g.info().stages;

  CHECK(g.info().epsilon == 0.2);
  CHECK(g.info().delta > 0.0);
  CHECK(g.info().net_size == static_cast<int>(g.coverage().center_coords.rows()));
  CHECK(g.info().dim == g.coverage().center_coords.cols());
  CHECK(g.info().terms == static_cast<int>(g.zetas().size()));
  CHECK(g.coverage().radius == doctest::Approx(2.0 * g.info().delta / 3.0));

  // Projection residuals stay below the net radius delta/3.
  CHECK(st.projection_max_train < g.info().delta / 3.0);
  // Pointwise triangle inequality: the end-to-end error on covered
  // validation points is at most interpolation + ridge validation error.
  CHECK(st.end_to_end_max_val <= st.interpolation_max_val + st.ridge_max_val + 1e-8);
  CHECK(st.uncovered_val >= 0);
  CHECK(st.uncovered_val < sets.val.size());
}

TEST_CASE("coverage flags agree with the coordinate distance") {
  auto sets = small_family(8);
  Functional f = integral_functional(PhiKind::squares);
  auto g = build_approximant(f, sets.train, sets.val, 0.3, BuildConfig{}, 8);
  for (const auto& x : sets.val.points) {
    CHECK(g.covered(x) == (g.coverage_distance(x) < g.coverage().radius));
    CHECK(g.coords(x).size() == g.info().dim);
  }
}

TEST_CASE("constant functionals are recovered to working precision") {
  auto sets = small_family(9);
  Functional f = [](const ProductPoint&) { return 3.25; };
  BuildConfig config;
  config.fit.r0 = 0;
  config.fit.reg = 0.0;
  auto g = build_approximant(f, sets.train, sets.val, 0.5, config, 9);
  // The fitted function is globally constant, so check everywhere, covered
  // or not.
  auto eng = testutil::engine(102);
  for (const auto& x : sets.val.points) CHECK(std::abs(g.evaluate(x) - 3.25) <= 1e-8);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testutil::random_point(sets.train.grid(), sets.train.n(), eng, 2.0);
    CHECK(std::abs(g.evaluate(x) - 3.25) <= 1e-8);
  }
  CHECK(g.info().stages.ridge_target_met);
}

TEST_CASE("builds are deterministic for a fixed seed") {
  auto sets = small_family(10);
  Functional f = integral_functional(PhiKind::product);
  auto a = build_approximant(f, sets.train, sets.val, 0.2, BuildConfig{}, 11);
  auto b = build_approximant(f, sets.train, sets.val, 0.2, BuildConfig{}, 11);
  CHECK(a.info().net_size == b.info().net_size);
  CHECK(a.info().terms == b.info().terms);
  for (const auto& x : sets.val.points) CHECK(a.evaluate(x) == b.evaluate(x));
}

TEST_CASE("parallel evaluation does not change the build") {
  auto sets = small_family(12);
  Functional f = integral_functional(PhiKind::product);
  BuildConfig sequential;
  BuildConfig parallel;
  parallel.parallel_eval = true;
  auto a = build_approximant(f, sets.train, sets.val, 0.25, sequential, 13);
  auto b = build_approximant(f, sets.train, sets.val, 0.25, parallel, 13);
  for (const auto& x : sets.val.points) CHECK(a.evaluate(x) == b.evaluate(x));
}

TEST_CASE("error reports count uncovered points and skip them in the stats") {
  auto sets = small_family(14);
  Functional f = integral_functional(PhiKind::product);
  auto g = build_approximant(f, sets.train, sets.val, 0.2, BuildConfig{}, 14);

  // A test set with a deliberately out-of-family point.
  std::vector<ProductPoint> pts = sets.val.points;
  pts.push_back(10.0 * pts[0]);
  SampleSet test(pts, "probe");

  auto report = sup_error(f, g, test);
  REQUIRE(report.total == test.size());
  REQUIRE(static_cast<int>(report.rows.size()) == test.size());

  double max_err = 0.0, sum_err = 0.0;
  int covered_count = 0, uncovered = 0;
  for (int i = 0; i < test.size(); ++i) {
    const auto& row = report.rows[static_cast<std::size_t>(i)];
    CHECK(row.index == i);
    CHECK(row.covered == g.covered(test.points[static_cast<std::size_t>(i)]));
    if (row.covered) {
      CHECK(row.abs_error == std::abs(row.f_value - row.g_value));
      max_err = std::max(max_err, row.abs_error);
      sum_err += row.abs_error;
      ++covered_count;
    } else {
      ++uncovered;
    }
  }
  CHECK(report.uncovered == uncovered);
  CHECK(report.uncovered >= 1);  // the far point cannot be covered
  CHECK(report.max_abs_error == max_err);
  if (covered_count > 0)
    CHECK(report.mean_abs_error == doctest::Approx(sum_err / covered_count).epsilon(1e-15));
}

TEST_CASE("bad build inputs are usage errors") {
  auto sets = small_family(15);
  Functional f = integral_functional(PhiKind::product);
  CHECK_THROWS_AS(build_approximant(f, sets.train, sets.val, 0.0, BuildConfig{}, 1), Error);
  CHECK_THROWS_AS(build_approximant(f, sets.train, sets.val, -0.1, BuildConfig{}, 1), Error);
}
