#include "supnet/pou.hpp"

#include <algorithm>
#include <limits>

namespace supnet {

PartitionOfUnity::PartitionOfUnity(Eigen::MatrixXd center_coords, double radius,
                                   Eigen::VectorXd center_values)
    : centers_(std::move(center_coords)), radius_(radius), values_(std::move(center_values)) {
  if (centers_.rows() < 1 || centers_.cols() < 1)
    throw Error(ErrorCode::usage, "partition needs at least one center");
  if (!(radius_ > 0.0)) throw Error(ErrorCode::usage, "partition radius must be positive");
  if (values_.size() != centers_.rows())
    throw Error(ErrorCode::usage, "center value count does not match the centers");
}

Eigen::VectorXd PartitionOfUnity::weights(const Eigen::VectorXd& y) const {
  if (y.size() != centers_.cols())
    throw Error(ErrorCode::usage, "query dimension does not match the centers");
  Eigen::VectorXd hats(size());
  double sum = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < size(); ++k) {
    const double dist = (centers_.row(k).transpose() - y).norm();
    dmin = std::min(dmin, dist);
    const double hat = std::max(0.0, 1.0 - dist / radius_);
    hats[k] = hat;
    sum += hat;
  }
  if (sum <= 0.0)
    throw Error(ErrorCode::uncovered, "query point lies outside every partition bump", -1, dmin);
  return hats / sum;
}

double PartitionOfUnity::interpolant(const Eigen::VectorXd& y) const {
  return weights(y).dot(values_);
}

double PartitionOfUnity::min_center_distance(const Eigen::VectorXd& y) const {
  if (y.size() != centers_.cols())
    throw Error(ErrorCode::usage, "query dimension does not match the centers");
  double dmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < size(); ++k)
    dmin = std::min(dmin, (centers_.row(k).transpose() - y).norm());
  return dmin;
}

}  // namespace supnet
