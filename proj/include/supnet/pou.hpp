#pragma once

#include <Eigen/Dense>

#include "supnet/errors.hpp"

namespace supnet {

/// Normalized hat bumps around projected net centers, working purely in the
/// d-dimensional coordinate space. Each hat is max(0, 1 - dist/radius); the
/// weights are the hats divided by their sum, so they are nonnegative, sum
/// to one, and vanish exactly outside the supporting ball.
class PartitionOfUnity {
 public:
  PartitionOfUnity(Eigen::MatrixXd center_coords, double radius, Eigen::VectorXd center_values);

  int size() const { return static_cast<int>(centers_.rows()); }
  int dim() const { return static_cast<int>(centers_.cols()); }
  double radius() const { return radius_; }
  const Eigen::MatrixXd& center_coords() const { return centers_; }
  const Eigen::VectorXd& center_values() const { return values_; }

  /// Normalized weights at y. Raises an uncovered-point error (carrying the
  /// distance to the nearest center) when every hat vanishes.
  Eigen::VectorXd weights(const Eigen::VectorXd& y) const;

  /// Sum of center values blended by the weights.
  double interpolant(const Eigen::VectorXd& y) const;

  double min_center_distance(const Eigen::VectorXd& y) const;
  bool covered(const Eigen::VectorXd& y) const { return min_center_distance(y) < radius_; }

 private:
  Eigen::MatrixXd centers_;  // m x d
  double radius_ = 0.0;
  Eigen::VectorXd values_;   // m
};

}  // namespace supnet
