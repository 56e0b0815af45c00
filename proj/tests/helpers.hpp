#pragma once

// Shared fixtures for the unit tests: seeded random points, sample sets and
// a scalar toy space (m=1 grids make points plain numbers, so the worked
// net/cover examples can be checked against hand arithmetic).

#include <cstdint>
#include <random>
#include <vector>

#include "supnet/cover.hpp"
#include "supnet/space.hpp"

namespace testutil {

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + ((eng() >> 11) * 0x1.0p-53) * (hi - lo);
}

inline supnet::GridFunction random_function(const supnet::Grid& grid, std::mt19937_64& eng,
                                            double amp = 1.0) {
  Eigen::VectorXd v(grid.nodes());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(eng, -amp, amp);
  return supnet::GridFunction(grid, v);
}

inline supnet::ProductPoint random_point(const supnet::Grid& grid, int n, std::mt19937_64& eng,
                                         double amp = 1.0) {
  Eigen::MatrixXd v(grid.nodes(), n);
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = uniform(eng, -amp, amp);
  return supnet::ProductPoint(grid, v);
}

inline supnet::SampleSet random_samples(const supnet::Grid& grid, int n, int count,
                                        std::mt19937_64& eng, double amp = 1.0) {
  std::vector<supnet::ProductPoint> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) pts.push_back(random_point(grid, n, eng, amp));
  return supnet::SampleSet(std::move(pts));
}

/// Points of the trivial space (dim=1, m=1, n=1): each point is one number
/// and the product norm is its absolute value.
inline supnet::SampleSet scalar_samples(const std::vector<double>& values) {
  supnet::Grid grid{1, 1};
  std::vector<supnet::ProductPoint> pts;
  pts.reserve(values.size());
  for (double v : values) {
    Eigen::MatrixXd one(1, 1);
    one(0, 0) = v;
    pts.emplace_back(grid, one);
  }
  return supnet::SampleSet(std::move(pts));
}

/// u(x) sampled at the midpoints of a 1-d grid.
template <typename F>
supnet::GridFunction sampled(const supnet::Grid& grid, F&& f) {
  Eigen::VectorXd v(grid.nodes());
  for (int i = 0; i < grid.m; ++i) v[i] = f(grid.axis_coord(i));
  return supnet::GridFunction(grid, v);
}

}  // namespace testutil
