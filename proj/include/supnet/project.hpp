#pragma once

#include <vector>

#include "supnet/space.hpp"

namespace supnet {

/// Orthogonal projector onto the span of a finite set of points, held as a
/// weight-orthonormal basis (columns of a raw-value matrix). Coordinates in
/// this basis identify the subspace with R^d isometrically.
class Projector {
 public:
  Projector(Grid grid, int n, Eigen::MatrixXd basis, double rank_tol);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Grid& grid() const { return grid_; }
  int n() const { return n_; }
  double rank_tol() const { return rank_tol_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Coefficients of the best approximation of x in the subspace.
  Eigen::VectorXd coords(const ProductPoint& x) const;

  /// ||x - Px|| via the clamped Pythagorean identity.
  double residual(const ProductPoint& x) const;

  /// Point of the subspace with the given coordinates.
  ProductPoint reconstruct(const Eigen::VectorXd& y) const;

  ProductPoint apply(const ProductPoint& x) const { return reconstruct(coords(x)); }

  ProductPoint basis_vector(int ell) const;

 private:
  Grid grid_;
  int n_ = 1;
  Eigen::MatrixXd basis_;  // raw values, one column per basis vector
  double rank_tol_ = 1e-10;
};

/// Modified Gram-Schmidt with one reorthogonalization pass over the centers,
/// dropping any vector whose residual norm falls to rank_tol times the
/// largest center norm. All-zero input raises a degenerate-subspace error.
Projector build_projector(const std::vector<ProductPoint>& centers, double rank_tol = 1e-10);

}  // namespace supnet
