#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "supnet/errors.hpp"

namespace supnet {

enum class ZetaKind { cosine, sine, identity };

const char* zeta_kind_name(ZetaKind kind);            // "cos" / "sin" / "id"
ZetaKind zeta_kind_from_name(const std::string& name);

/// One scalar nonlinearity applied to a linear measurement.
struct ZetaSpec {
  ZetaKind kind = ZetaKind::cosine;
  double amplitude = 0.0;
};

double zeta_base(ZetaKind kind, double s);

/// Sum of amplitude-scaled nonlinearities of linear forms on R^d:
/// T(y) = sum_j amplitude_j * base_j(<t_j, y>), summed in term order.
struct RidgeModel {
  Eigen::MatrixXd freqs;        // d x r, column j paired with zetas[j]
  std::vector<ZetaSpec> zetas;  // r
  bool includes_constant = false;

  int dim() const { return static_cast<int>(freqs.rows()); }
  int terms() const { return static_cast<int>(zetas.size()); }

  double eval(const Eigen::VectorXd& y) const;

  /// One evaluation per row of Y.
  Eigen::VectorXd eval_rows(const Eigen::MatrixXd& Y) const;
};

/// count seeded standard-normal vectors scaled by `scale`, preceded by the
/// zero frequency (the constant feature). Columns are drawn in order, so a
/// larger count with the same seed extends the smaller set.
Eigen::MatrixXd sample_frequencies(int d, int count, double scale, std::uint64_t seed);

/// Least squares over the features {cos<t_j,.>, sin<t_j,.>} (sin dropped for
/// zero frequencies; optionally prefixed by the d coordinate identities) via
/// normal equations with Tikhonov term reg*I, solved by a dense symmetric
/// factorization. reg is scaled by the mean feature energy trace(AtA)/F, so
/// reg=0 stays exactly unregularized.
RidgeModel fit(const Eigen::MatrixXd& Y, const Eigen::VectorXd& targets,
               const Eigen::MatrixXd& freqs, double reg, bool identity_terms = false);

struct FitConfig {
  int r0 = 16;
  int r_max = 4096;
  double reg = 1e-10;
  bool identity_terms = true;
  double scale = 0.0;  // 0 -> median pairwise distance heuristic
};

struct FitResult {
  RidgeModel model;
  double train_max_residual = 0.0;
  double val_max_residual = 0.0;
  int freq_count = 0;   // nonzero random frequencies in the chosen model
  bool target_met = false;
  double scale = 0.0;   // frequency scale actually used
};

/// Doubles the frequency count from r0 up to r_max until the max validation
/// residual drops below target_err; returns the best model seen. A cap miss
/// is reported through target_met, not an exception. An empty validation set
/// falls back to the training residual for the stopping rule.
FitResult fit_auto(const Eigen::MatrixXd& Ytrain, const Eigen::VectorXd& ttrain,
                   const Eigen::MatrixXd& Yval, const Eigen::VectorXd& tval, double target_err,
                   const FitConfig& config, std::uint64_t seed);

/// Median pairwise distance between rows (subsampled deterministically for
/// large inputs); 0 when all rows coincide.
double median_pairwise_distance(const Eigen::MatrixXd& Y);

}  // namespace supnet
