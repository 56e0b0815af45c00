#include "supnet/project.hpp"

#include <algorithm>
#include <cmath>

namespace supnet {

Projector::Projector(Grid grid, int n, Eigen::MatrixXd basis, double rank_tol)
    : grid_(grid), n_(n), basis_(std::move(basis)), rank_tol_(rank_tol) {
  grid_.validate();
  if (n_ < 1) throw Error(ErrorCode::usage, "projector needs at least one component");
  if (basis_.cols() < 1) throw Error(ErrorCode::degenerate, "projector basis is empty");
  if (basis_.rows() != grid_.nodes() * n_)
    throw Error(ErrorCode::usage, "basis rows do not match the space size");
}

Eigen::VectorXd Projector::coords(const ProductPoint& x) const {
  require_same_grid(grid_, x.grid());
  if (x.n() != n_) throw Error(ErrorCode::usage, "operands have different component counts");
  return grid_.weight() * (basis_.transpose() * x.flat());
}

double Projector::residual(const ProductPoint& x) const {
  const Eigen::VectorXd c = coords(x);
  const double full = prod_inner(x, x);
  return std::sqrt(std::max(0.0, full - c.squaredNorm()));
}

ProductPoint Projector::reconstruct(const Eigen::VectorXd& y) const {
  if (y.size() != basis_.cols())
    throw Error(ErrorCode::usage, "coordinate vector does not match the basis dimension");
  const Eigen::VectorXd raw = basis_ * y;
  return ProductPoint(grid_,
                      Eigen::Map<const Eigen::MatrixXd>(raw.data(), grid_.nodes(), n_));
}

ProductPoint Projector::basis_vector(int ell) const {
  if (ell < 0 || ell >= dim()) throw Error(ErrorCode::usage, "basis index out of range", ell);
  return reconstruct(Eigen::VectorXd::Unit(dim(), ell));
}

Projector build_projector(const std::vector<ProductPoint>& centers, double rank_tol) {
  if (centers.empty()) throw Error(ErrorCode::usage, "projector needs at least one center");
  if (!(rank_tol > 0.0) || rank_tol >= 1.0)
    throw Error(ErrorCode::usage, "rank tolerance must lie in (0, 1)");
  const Grid grid = centers.front().grid();
  const int n = centers.front().n();
  for (const auto& c : centers) require_same_shape(centers.front(), c);

  double max_norm = 0.0;
  for (const auto& c : centers) max_norm = std::max(max_norm, prod_norm(c));
  if (max_norm == 0.0)
    throw Error(ErrorCode::degenerate, "every center is zero; the span has no direction");
  const double drop = rank_tol * max_norm;

  const double w = grid.weight();
  const double sqrt_w = std::sqrt(w);
  Eigen::MatrixXd Q(grid.nodes() * n, static_cast<Eigen::Index>(centers.size()));
  Eigen::Index d = 0;
  for (const auto& c : centers) {
    Eigen::VectorXd v = c.flat();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index l = 0; l < d; ++l) v -= (w * Q.col(l).dot(v)) * Q.col(l);
    const double vnorm = sqrt_w * v.norm();
    if (vnorm <= drop) continue;
    Q.col(d) = v / vnorm;
    ++d;
  }
  return Projector(grid, n, Q.leftCols(d), rank_tol);
}

}  // namespace supnet
