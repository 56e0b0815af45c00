#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "supnet/demos.hpp"

using namespace supnet;

TEST_CASE("family names round-trip") {
  for (auto kind :
       {FamilyKind::fourier_band, FamilyKind::bump_mixture, FamilyKind::image_phantom})
    CHECK(family_kind_from_name(family_kind_name(kind)) == kind);
  CHECK_THROWS_AS(family_kind_from_name("nope"), Error);
  for (auto kind : {PhiKind::product, PhiKind::squares, PhiKind::clipped})
    CHECK(phi_kind_from_name(phi_kind_name(kind)) == kind);
  CHECK_THROWS_AS(phi_kind_from_name("nope"), Error);
}

TEST_CASE("sample generation is deterministic with disjoint set streams") {
  auto spec = FamilySpec::defaults(FamilyKind::fourier_band);
  auto a = generate_family(spec, 20, 10, 10, 99);
  auto b = generate_family(spec, 20, 10, 10, 99);
  REQUIRE(a.train.size() == 20);
  for (int i = 0; i < a.train.size(); ++i)
    CHECK((a.train.points[static_cast<std::size_t>(i)].mat() -
           b.train.points[static_cast<std::size_t>(i)].mat())
              .norm() == 0.0);
  // Different streams: the first validation point differs from the first
  // training point (the coefficient boxes are nondegenerate).
  CHECK((a.train.points[0].mat() - a.val.points[0].mat()).norm() > 0.0);
  CHECK((a.val.points[0].mat() - a.test.points[0].mat()).norm() > 0.0);
  // Different seeds give different draws.
  auto c = generate_family(spec, 20, 10, 10, 100);
  CHECK((a.train.points[0].mat() - c.train.points[0].mat()).norm() > 0.0);
}

TEST_CASE("every generated sample respects the analytic norm bound") {
  for (auto kind :
       {FamilyKind::fourier_band, FamilyKind::bump_mixture, FamilyKind::image_phantom}) {
    auto spec = FamilySpec::defaults(kind);
    if (kind == FamilyKind::image_phantom) spec.m = 16;
    double bound = spec.norm_bound();
    auto sets = generate_family(spec, 40, 20, 20, 3);
    for (const auto* set : {&sets.train, &sets.val, &sets.test})
      for (const auto& x : set->points) CHECK(prod_norm(x) <= bound + 1e-12);
  }
}

TEST_CASE("phantom samples are two rectangles on a 2-d grid") {
  auto spec = FamilySpec::defaults(FamilyKind::image_phantom);
  CHECK(spec.grid_dim() == 2);
  CHECK(spec.n == 1);
  auto sets = generate_family(spec, 5, 0, 0, 4);
  for (const auto& x : sets.train.points) {
    CHECK(x.grid().dim == 2);
    // Piecewise-constant with at most 4 levels (0, i1, i2, i1+i2).
    std::vector<double> levels;
    for (Eigen::Index i = 0; i < x.mat().rows(); ++i) {
      double v = x.mat()(i, 0);
      bool seen = false;
      for (double l : levels) seen = seen || l == v;
      if (!seen) levels.push_back(v);
    }
    CHECK(levels.size() <= 4);
  }
}

TEST_CASE("integral functionals match hand-computed values on a tiny grid") {
  Grid grid{1, 2};
  Eigen::MatrixXd uv(2, 2);
  uv << 1.0, 3.0, 2.0, 4.0;  // u = (1,2), v = (3,4), weight 1/2
  ProductPoint x(grid, uv);
  CHECK(integral_functional(PhiKind::product)(x) == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(integral_functional(PhiKind::squares)(x) == doctest::Approx(15.0).epsilon(1e-15));
  CHECK(integral_functional(PhiKind::clipped)(x) == doctest::Approx(1.0).epsilon(1e-15));

  // One component: the second slot falls back to the first.
  Eigen::MatrixXd uu(2, 1);
  uu << 1.0, 2.0;
  ProductPoint y(grid, uu);
  CHECK(integral_functional(PhiKind::product)(y) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("tomography bin groups each sum to the total mass") {
  Grid grid{2, 8};
  auto eng = testutil::engine(121);
  auto u = testutil::random_function(grid, eng);
  Tomography tomo{grid, 3};
  Eigen::VectorXd sums = tomo.sums(u);
  REQUIRE(sums.size() == 12);
  double mass = grid.weight() * u.values().sum();
  for (int group = 0; group < 4; ++group)
    CHECK(sums.segment(group * 3, 3).sum() == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("a rectangle inside one row band lands in a single row bin") {
  Grid grid{2, 8};
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.nodes());
  // Rows iy = 0,1 with bins = 4 map to row bin 0; fill them with intensity 2.
  for (int iy = 0; iy < 2; ++iy)
    for (int ix = 0; ix < 8; ++ix) v[grid.index2(ix, iy)] = 2.0;
  GridFunction u(grid, v);
  Tomography tomo{grid, 4};
  Eigen::VectorXd sums = tomo.sums(u);
  double mass = grid.weight() * v.sum();
  CHECK(sums[0] == doctest::Approx(mass).epsilon(1e-12));
  CHECK(sums.segment(1, 3).lpNorm<Eigen::Infinity>() == 0.0);

  // The selector functional picks single bins.
  auto f0 = tomography_functional(tomo, 0);
  ProductPoint x(grid, u.values());
  CHECK(f0(x) == sums[0]);
  CHECK_THROWS_AS(tomography_functional(tomo, 16), Error);
  CHECK_THROWS_AS(tomography_functional(tomo, -1), Error);
}

TEST_CASE("tomography rejects one-dimensional grids") {
  Grid grid{1, 8};
  Tomography tomo{grid, 4};
  auto u = GridFunction::constant(grid, 1.0);
  CHECK_THROWS_AS(tomo.sums(u), Error);
  try {
    tomo.sums(u);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::usage);
  }
}

TEST_CASE("blur preserves constants exactly") {
  for (int dim : {1, 2}) {
    Grid grid{dim, 12};
    auto u = GridFunction::constant(grid, 3.7);
    auto blurred = blur_apply(u, 1.5);
    CHECK((blurred.values().array() - 3.7).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("blur preserves total mass") {
  auto eng = testutil::engine(122);
  for (int dim : {1, 2}) {
    Grid grid{dim, 10};
    for (int trial = 0; trial < 5; ++trial) {
      auto u = testutil::random_function(grid, eng);
      auto blurred = blur_apply(u, 1.2);
      double before = grid.weight() * u.values().sum();
      double after = grid.weight() * blurred.values().sum();
      CHECK(std::abs(before - after) <= 1e-10);
    }
  }
}

TEST_CASE("blur is linear") {
  auto eng = testutil::engine(123);
  Grid grid{2, 9};
  auto u = testutil::random_function(grid, eng);
  auto v = testutil::random_function(grid, eng);
  auto lhs = blur_apply(axpy(2.0, u, -0.5 * v), 0.9);
  auto rhs = axpy(2.0, blur_apply(u, 0.9), -0.5 * blur_apply(v, 0.9));
  CHECK((lhs.values() - rhs.values()).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("blur smooths: the discrete oscillation shrinks") {
  Grid grid{1, 32};
  Eigen::VectorXd v(grid.nodes());
  for (int i = 0; i < grid.m; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  GridFunction u(grid, v);
  auto blurred = blur_apply(u, 1.0);
  CHECK(blurred.values().lpNorm<Eigen::Infinity>() <
        0.5 * u.values().lpNorm<Eigen::Infinity>());
}

TEST_CASE("blur kernels wider than the grid are usage errors") {
  Grid grid{1, 16};
  auto u = GridFunction::constant(grid, 1.0);
  CHECK_THROWS_AS(blur_apply(u, 10.0), Error);
  CHECK_THROWS_AS(blur_apply(u, 0.0), Error);
  CHECK_THROWS_AS(blur_apply(u, -1.0), Error);
}

TEST_CASE("the blur map handle blurs the first component") {
  Grid grid{2, 8};
  auto eng = testutil::engine(124);
  auto u = testutil::random_function(grid, eng);
  ProductPoint x(grid, u.values());
  auto handle = blur_operator(1.5);
  auto direct = blur_apply(u, 1.5);
  CHECK((handle(x).values() - direct.values()).norm() == 0.0);
}

TEST_CASE("family validation rejects malformed specs") {
  auto spec = FamilySpec::defaults(FamilyKind::fourier_band);
  spec.m = 0;
  CHECK_THROWS_AS(generate_family(spec, 4, 0, 0, 1), Error);
  spec = FamilySpec::defaults(FamilyKind::fourier_band);
  spec.sin_coef = {{0.0, 1.0}};  // needs exactly three ranges
  CHECK_THROWS_AS(generate_family(spec, 4, 0, 0, 1), Error);
  spec = FamilySpec::defaults(FamilyKind::bump_mixture);
  spec.bumps = 0;
  CHECK_THROWS_AS(generate_family(spec, 4, 0, 0, 1), Error);
  spec = FamilySpec::defaults(FamilyKind::bump_mixture);
  spec.bump_width = {0.0, 0.1};  // zero-width tents are degenerate
  CHECK_THROWS_AS(generate_family(spec, 4, 0, 0, 1), Error);
  spec = FamilySpec::defaults(FamilyKind::image_phantom);
  spec.rect1_intensity = {1.0, 0.5};  // hi < lo
  CHECK_THROWS_AS(generate_family(spec, 4, 0, 0, 1), Error);
}
