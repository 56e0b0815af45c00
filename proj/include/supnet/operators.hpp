#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "supnet/assemble.hpp"
#include "supnet/space.hpp"

namespace supnet {

using MapHandle = std::function<GridFunction(const ProductPoint&)>;

/// Net over computed outputs: templates within `radius` of every output.
struct RangeNet {
  std::vector<GridFunction> templates;
  double radius = 0.0;
};

/// Farthest-point traversal over outputs in the range norm (same tie rules
/// as the sample-space net).
RangeNet build_range_net(const std::vector<GridFunction>& outputs, double radius);

Eigen::VectorXd range_pou_weights(const RangeNet& net, const GridFunction& z);

/// Hat-blended combination of the templates nearest to z. Convexity keeps
/// the result within `radius` of z whenever z is covered; uncovered z raises
/// an uncovered-point error.
GridFunction range_pou_project(const RangeNet& net, const GridFunction& z);

double range_net_min_distance(const RangeNet& net, const GridFunction& z);

/// Weight-orthonormal basis of the span of the range templates, giving the
/// isometric coordinate map between the output subspace and R^d.
class RangeBasis {
 public:
  RangeBasis(Grid grid, Eigen::MatrixXd basis);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::VectorXd coords(const GridFunction& z) const;
  GridFunction synthesize(const Eigen::VectorXd& c) const;
  GridFunction basis_vector(int ell) const;

 private:
  Grid grid_;
  Eigen::MatrixXd basis_;  // nodes x d
};

RangeBasis build_range_basis(const std::vector<GridFunction>& templates, double rank_tol = 1e-10);

struct CoordinateSummary {
  double epsilon = 0.0;
  double delta = 0.0;
  int net_size = 0;
  int dim = 0;
  int terms = 0;
  StageResiduals stages;
};

struct OperatorInfo {
  double epsilon = 0.0;
  int range_net_size = 0;
  int range_dim = 0;
  int atoms = 0;
  double coordinate_budget = 0.0;      // epsilon / (3 * range_dim)
  double range_pou_max_train = 0.0;
  double range_pou_max_val = 0.0;
  double end_to_end_max_val = 0.0;     // range norm, jointly covered val points
  double sum_coordinate_max = 0.0;
  int uncovered_val = 0;
  std::uint64_t seed = 0;
  std::vector<CoordinateSummary> coordinates;
};

/// Finite-rank approximant g(x) = sum_j y_j * zeta_j(phi_j(x)): every output
/// lies in the span of the atoms, so the output rank is at most the range
/// basis dimension.
class FiniteRankOperator {
 public:
  FiniteRankOperator() = default;
  FiniteRankOperator(Grid in_grid, int n, Grid range_grid, std::vector<GridFunction> atoms,
                     std::vector<ZetaSpec> zetas, MeasurementSet measurements, OperatorInfo info);

  GridFunction apply(const ProductPoint& x) const;

  /// Input-side coverage: every coordinate model covers x. Only available on
  /// a freshly built operator (coordinate models are not serialized).
  bool covered(const ProductPoint& x) const;
  bool has_coverage_data() const { return !coordinate_models_.empty(); }

  const Grid& in_grid() const { return in_grid_; }
  int n() const { return n_; }
  const Grid& range_grid() const { return range_grid_; }
  const std::vector<GridFunction>& atoms() const { return atoms_; }
  const std::vector<ZetaSpec>& zetas() const { return zetas_; }
  const MeasurementSet& measurements() const { return measurements_; }
  const OperatorInfo& info() const { return info_; }
  OperatorInfo& info() { return info_; }

  const std::vector<FunctionalApproximant>& coordinate_models() const {
    return coordinate_models_;
  }
  const RangeNet& range_net() const { return range_net_; }

  void attach_build_data(std::vector<FunctionalApproximant> coordinate_models, RangeNet net);

 private:
  Grid in_grid_;
  int n_ = 1;
  Grid range_grid_;
  std::vector<GridFunction> atoms_;
  std::vector<ZetaSpec> zetas_;
  MeasurementSet measurements_;
  OperatorInfo info_;
  std::vector<FunctionalApproximant> coordinate_models_;  // build-time only
  RangeNet range_net_;                                    // build-time only
};

struct OperatorConfig {
  BuildConfig scalar;
  double range_rank_tol = 1e-10;
  bool parallel_eval = false;

  // Coordinate targets are tiny, and past a few hundred features the fits
  // plateau on the partition ramps; a lower cap keeps the solves quartic-free.
  OperatorConfig() { scalar.fit.r_max = 512; }
};

/// Range net at epsilon/3 over the training outputs, orthonormal range
/// basis, one scalar pipeline per coordinate at budget epsilon/(3d), atoms
/// synthesized from the basis and the fitted amplitudes.
FiniteRankOperator build_operator(const MapHandle& f, const SampleSet& train,
                                  const SampleSet& val, double epsilon,
                                  const OperatorConfig& config, std::uint64_t seed);

struct OpPointRecord {
  int index = 0;
  double f_norm = 0.0;
  double g_norm = 0.0;
  double y_error = 0.0;
  bool covered = true;
};

struct OperatorReport {
  double max_y_error = 0.0;   // over covered points
  double mean_y_error = 0.0;  // over covered points
  int uncovered = 0;
  int total = 0;
  std::vector<OpPointRecord> rows;
};

/// Pointwise range-norm comparison over a test set. A point counts as
/// covered when its output is range-covered and its input is covered by
/// every coordinate model.
OperatorReport operator_error(const MapHandle& f, const FiniteRankOperator& g,
                              const SampleSet& test);

}  // namespace supnet
