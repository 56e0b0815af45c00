#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

#include "supnet/errors.hpp"

namespace supnet {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform midpoint grid on [0,1]^dim. Functions are sampled at cell
/// midpoints and inner products use the midpoint quadrature rule, so the
/// quadrature weight is the cell volume 1/m^dim.
struct Grid {
  int dim = 1;  // 1 or 2
  int m = 1;    // points per axis

  double weight() const { return dim == 1 ? 1.0 / m : 1.0 / (static_cast<double>(m) * m); }
  Eigen::Index nodes() const { return dim == 1 ? m : static_cast<Eigen::Index>(m) * m; }

  /// Midpoint coordinate along one axis.
  double axis_coord(int i) const { return (i + 0.5) / m; }
  /// Flat index of a 2-d node; x varies fastest.
  Eigen::Index index2(int ix, int iy) const { return static_cast<Eigen::Index>(iy) * m + ix; }

  void validate() const {
    if (dim != 1 && dim != 2) throw Error(ErrorCode::usage, "grid dim must be 1 or 2");
    if (m < 1) throw Error(ErrorCode::usage, "grid needs at least one point per axis");
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorCode::usage, "operands live on different grids");
}

/// Real-valued function sampled on a Grid.
template <typename Scalar>
class GridFunctionT {
 public:
  GridFunctionT() = default;
  GridFunctionT(Grid grid, VectorX<Scalar> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.nodes())
      throw Error(ErrorCode::usage, "value vector length does not match the grid");
  }

  static GridFunctionT constant(Grid grid, Scalar c) {
    grid.validate();
    return GridFunctionT(grid, VectorX<Scalar>::Constant(grid.nodes(), c));
  }
  static GridFunctionT zero(Grid grid) { return constant(grid, Scalar(0)); }

  const Grid& grid() const { return grid_; }
  const VectorX<Scalar>& values() const { return values_; }
  VectorX<Scalar>& values() { return values_; }

 private:
  Grid grid_;
  VectorX<Scalar> values_;
};

/// Point of the n-fold product space: n grid functions on one shared grid,
/// stored as the columns of a dense matrix so inner products and norms
/// reduce to single Eigen reductions.
template <typename Scalar>
class ProductPointT {
 public:
  ProductPointT() = default;
  ProductPointT(Grid grid, MatrixX<Scalar> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.rows() != grid_.nodes() || values_.cols() < 1)
      throw Error(ErrorCode::usage, "component matrix does not match the grid");
  }
  explicit ProductPointT(const std::vector<GridFunctionT<Scalar>>& components) {
    if (components.empty())
      throw Error(ErrorCode::usage, "a product point needs at least one component");
    grid_ = components.front().grid();
    values_.resize(grid_.nodes(), static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) {
      require_same_grid(grid_, components[i].grid());
      values_.col(static_cast<Eigen::Index>(i)) = components[i].values();
    }
  }

  static ProductPointT zero(Grid grid, int n) {
    grid.validate();
    return ProductPointT(grid, MatrixX<Scalar>::Zero(grid.nodes(), n));
  }

  const Grid& grid() const { return grid_; }
  int n() const { return static_cast<int>(values_.cols()); }
  const MatrixX<Scalar>& mat() const { return values_; }
  MatrixX<Scalar>& mat() { return values_; }

  GridFunctionT<Scalar> component(int i) const {
    if (i < 0 || i >= n()) throw Error(ErrorCode::usage, "component index out of range");
    return GridFunctionT<Scalar>(grid_, values_.col(i));
  }

  /// Components concatenated into one raw vector (column-major storage makes
  /// this a plain view of the underlying buffer).
  Eigen::Map<const VectorX<Scalar>> flat() const {
    return Eigen::Map<const VectorX<Scalar>>(values_.data(), values_.size());
  }

 private:
  Grid grid_;
  MatrixX<Scalar> values_;
};

inline void require_same_shape(const ProductPointT<double>& a, const ProductPointT<double>& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.n() != b.n()) throw Error(ErrorCode::usage, "operands have different component counts");
}

// ---- inner products and norms ---------------------------------------------

template <typename S>
S inner(const GridFunctionT<S>& u, const GridFunctionT<S>& v) {
  require_same_grid(u.grid(), v.grid());
  return u.grid().weight() * u.values().dot(v.values());
}

template <typename S>
S norm(const GridFunctionT<S>& u) {
  using std::sqrt;
  return sqrt(std::max(S(0), inner(u, u)));
}

template <typename S>
S prod_inner(const ProductPointT<S>& x, const ProductPointT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  if (x.n() != y.n()) throw Error(ErrorCode::usage, "operands have different component counts");
  return x.grid().weight() * x.mat().cwiseProduct(y.mat()).sum();
}

template <typename S>
S prod_norm(const ProductPointT<S>& x) {
  using std::sqrt;
  return sqrt(std::max(S(0), prod_inner(x, x)));
}

/// Distance in the product norm, evaluated on the raw difference so it is
/// exactly symmetric in its arguments.
template <typename S>
S prod_dist(const ProductPointT<S>& x, const ProductPointT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  if (x.n() != y.n()) throw Error(ErrorCode::usage, "operands have different component counts");
  using std::sqrt;
  return sqrt(x.grid().weight()) * (x.mat() - y.mat()).norm();
}

// ---- vector-space operations ----------------------------------------------

template <typename S>
GridFunctionT<S> operator+(const GridFunctionT<S>& u, const GridFunctionT<S>& v) {
  require_same_grid(u.grid(), v.grid());
  return GridFunctionT<S>(u.grid(), u.values() + v.values());
}

template <typename S>
GridFunctionT<S> operator-(const GridFunctionT<S>& u, const GridFunctionT<S>& v) {
  require_same_grid(u.grid(), v.grid());
  return GridFunctionT<S>(u.grid(), u.values() - v.values());
}

template <typename S>
GridFunctionT<S> operator*(S a, const GridFunctionT<S>& u) {
  return GridFunctionT<S>(u.grid(), a * u.values());
}

/// y + a*x.
template <typename S>
GridFunctionT<S> axpy(S a, const GridFunctionT<S>& x, const GridFunctionT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  return GridFunctionT<S>(x.grid(), y.values() + a * x.values());
}

template <typename S>
ProductPointT<S> operator+(const ProductPointT<S>& x, const ProductPointT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  if (x.n() != y.n()) throw Error(ErrorCode::usage, "operands have different component counts");
  return ProductPointT<S>(x.grid(), x.mat() + y.mat());
}

template <typename S>
ProductPointT<S> operator-(const ProductPointT<S>& x, const ProductPointT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  if (x.n() != y.n()) throw Error(ErrorCode::usage, "operands have different component counts");
  return ProductPointT<S>(x.grid(), x.mat() - y.mat());
}

template <typename S>
ProductPointT<S> operator*(S a, const ProductPointT<S>& x) {
  return ProductPointT<S>(x.grid(), a * x.mat());
}

template <typename S>
ProductPointT<S> axpy(S a, const ProductPointT<S>& x, const ProductPointT<S>& y) {
  require_same_grid(x.grid(), y.grid());
  if (x.n() != y.n()) throw Error(ErrorCode::usage, "operands have different component counts");
  return ProductPointT<S>(x.grid(), y.mat() + a * x.mat());
}

using GridFunction = GridFunctionT<double>;
using ProductPoint = ProductPointT<double>;

}  // namespace supnet
