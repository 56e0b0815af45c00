#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "supnet/cover.hpp"
#include "supnet/operators.hpp"
#include "supnet/space.hpp"

namespace supnet {

enum class FamilyKind { fourier_band, bump_mixture, image_phantom };

std::string family_kind_name(FamilyKind kind);
FamilyKind family_kind_from_name(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Parameter boxes for the sample families. Defaults keep most parameters
/// collapsed to a point so the generated manifolds stay low-dimensional at
/// desk-scale sample counts.
struct FamilySpec {
  FamilyKind kind = FamilyKind::fourier_band;
  int n = 2;
  int m = 100;

  // fourier_band: u(x) = sum_{k<=3} a_k sin(2 pi k x) + b_k cos(2 pi k x).
  std::vector<Interval> sin_coef = {{-0.5, 0.5}, {0.0, 0.0}, {0.0, 0.0}};
  std::vector<Interval> cos_coef = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};

  // bump_mixture: fixed number of tent bumps per component.
  int bumps = 1;
  Interval bump_height = {0.2, 1.0};
  Interval bump_width = {0.12, 0.12};
  Interval bump_center = {0.3, 0.7};

  // image_phantom: two axis-aligned rectangles, geometry fixed by default,
  // first intensity free, second collapsed.
  Interval rect1_x = {0.15, 0.45};
  Interval rect1_y = {0.2, 0.55};
  Interval rect1_intensity = {0.05, 1.0};
  Interval rect2_x = {0.55, 0.85};
  Interval rect2_y = {0.5, 0.8};
  Interval rect2_intensity = {0.6, 0.6};

  static FamilySpec defaults(FamilyKind kind);

  int grid_dim() const { return kind == FamilyKind::image_phantom ? 2 : 1; }
  Grid grid() const { return Grid{grid_dim(), m}; }
  /// Sup-norm bound over the parameter box; the weighted norm never exceeds it.
  double norm_bound() const;
};

struct FamilySets {
  SampleSet train;
  SampleSet val;
  SampleSet test;
};

/// Three disjoint seed streams (train/val/test) from one base seed.
FamilySets generate_family(const FamilySpec& spec, int n_train, int n_val, int n_test,
                           std::uint64_t seed);

enum class PhiKind { product, squares, clipped };

std::string phi_kind_name(PhiKind kind);
PhiKind phi_kind_from_name(const std::string& name);

/// f(u, v, ...) = weight * sum_i Phi(u_i, v_i) over the first two components
/// (second component falls back to the first when n == 1).
Functional integral_functional(PhiKind phi);

/// Axis and diagonal bin sums of a 2-D image: rows, columns, then the two
/// diagonal directions, each split into `bins` index ranges.
struct Tomography {
  Grid grid;
  int bins = 4;

  int size() const { return 4 * bins; }
  Eigen::VectorXd sums(const GridFunction& u) const;
};

/// Scalar functional selecting one tomography bin sum.
Functional tomography_functional(const Tomography& tomo, int which);

/// Separable truncated-Gaussian blur with half-sample reflection at the
/// borders; preserves constants and total mass exactly.
MapHandle blur_operator(double sigma);

GridFunction blur_apply(const GridFunction& u, double sigma);

}  // namespace supnet
