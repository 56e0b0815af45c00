#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "supnet/cover.hpp"
#include "supnet/pou.hpp"
#include "supnet/project.hpp"
#include "supnet/ridge.hpp"
#include "supnet/space.hpp"

namespace supnet {

/// Linear measurements represented by points of the product space:
/// phi_j(x) = <x, h_j> = sum_i <x_i, h_ji>.
struct MeasurementSet {
  std::vector<ProductPoint> representers;

  int size() const { return static_cast<int>(representers.size()); }
  double phi(int j, const ProductPoint& x) const { return prod_inner(x, representers[j]); }
  Eigen::VectorXd phis(const ProductPoint& x) const;
};

/// Turns frequency vectors over projector coordinates into measurement
/// representers: h_j = sum_l (t_j)_l * basis_l, so that
/// phi_j(x) = <t_j, coords(Px)> exactly.
MeasurementSet lift_measurements(const Projector& projector, const Eigen::MatrixXd& freqs);

struct StageResiduals {
  double projection_max_train = 0.0;
  double interpolation_max_val = 0.0;
  double ridge_max_train = 0.0;
  double ridge_max_val = 0.0;
  double end_to_end_max_val = 0.0;
  int uncovered_val = 0;
  bool ridge_target_met = true;
};

struct ApproximantInfo {
  double epsilon = 0.0;
  double delta = 0.0;
  int net_size = 0;
  int dim = 0;
  int terms = 0;
  std::uint64_t seed = 0;
  StageResiduals stages;
  std::string functional;  // optional name so the eval CLI can recompute references
  std::map<std::string, double> functional_params;
};

/// Coordinate-space data needed to decide whether a query point lies inside
/// the region the approximant was certified on. Not needed for evaluation.
struct CoverageData {
  Eigen::MatrixXd basis;          // raw values, one column per basis vector
  Eigen::MatrixXd center_coords;  // m x d
  Eigen::VectorXd center_values;  // m
  double radius = 0.0;
};

/// The assembled approximant g(x) = sum_j zeta_j(phi_j(x)). Evaluation uses
/// only the measurements and nonlinearities; the coverage block exists for
/// reporting.
class FunctionalApproximant {
 public:
  FunctionalApproximant() = default;
  FunctionalApproximant(Grid grid, int n, MeasurementSet measurements,
                        std::vector<ZetaSpec> zetas, Eigen::MatrixXd freqs,
                        CoverageData coverage, ApproximantInfo info);

  double evaluate(const ProductPoint& x) const;

  bool covered(const ProductPoint& x) const;
  double coverage_distance(const ProductPoint& x) const;
  Eigen::VectorXd coords(const ProductPoint& x) const;

  const Grid& grid() const { return grid_; }
  int n() const { return n_; }
  const MeasurementSet& measurements() const { return measurements_; }
  const std::vector<ZetaSpec>& zetas() const { return zetas_; }
  const Eigen::MatrixXd& freqs() const { return freqs_; }
  const CoverageData& coverage() const { return coverage_; }
  const ApproximantInfo& info() const { return info_; }
  ApproximantInfo& info() { return info_; }

 private:
  Grid grid_;
  int n_ = 1;
  MeasurementSet measurements_;
  std::vector<ZetaSpec> zetas_;
  Eigen::MatrixXd freqs_;  // d x r, retained alongside the lifted representers
  CoverageData coverage_;
  ApproximantInfo info_;
};

struct BuildConfig {
  FitConfig fit;
  int pair_budget = 2000;
  double rank_tol = 1e-10;
  bool parallel_eval = false;
};

/// Full pipeline: modulus estimate -> delta -> greedy net at delta/3 ->
/// projector -> partition of unity at radius 2*delta/3 -> ridge fit of the
/// blended interpolant at target epsilon/3 -> lifted measurements.
/// Deterministic for fixed inputs and seed.
FunctionalApproximant build_approximant(const Functional& f, const SampleSet& train,
                                        const SampleSet& val, double epsilon,
                                        const BuildConfig& config, std::uint64_t seed);

/// Same pipeline from precomputed evaluations (one value per train/val
/// sample); used by the operator module to avoid re-running the map.
FunctionalApproximant build_approximant_values(const Eigen::VectorXd& f_train,
                                               const Eigen::VectorXd& f_val,
                                               const SampleSet& train, const SampleSet& val,
                                               double epsilon, const BuildConfig& config,
                                               std::uint64_t seed);

struct PointRecord {
  int index = 0;
  double f_value = 0.0;
  double g_value = 0.0;
  double abs_error = 0.0;
  bool covered = true;
};

struct ErrorReport {
  double max_abs_error = 0.0;   // over covered points
  double mean_abs_error = 0.0;  // over covered points
  int uncovered = 0;
  int total = 0;
  std::vector<PointRecord> rows;
};

/// Pointwise comparison of f and g over a test set. Uncovered points are
/// excluded from the max/mean but counted and listed.
ErrorReport sup_error(const Functional& f, const FunctionalApproximant& g, const SampleSet& test);

}  // namespace supnet
