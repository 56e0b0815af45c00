#include "supnet/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "supnet/rng.hpp"

namespace supnet {

Eigen::VectorXd MeasurementSet::phis(const ProductPoint& x) const {
  Eigen::VectorXd out(size());
  for (int j = 0; j < size(); ++j) out[j] = prod_inner(x, representers[static_cast<std::size_t>(j)]);
  return out;
}

MeasurementSet lift_measurements(const Projector& projector, const Eigen::MatrixXd& freqs) {
  if (freqs.rows() != projector.dim())
    throw Error(ErrorCode::usage, "frequency dimension does not match the projector");
  MeasurementSet ms;
  ms.representers.reserve(static_cast<std::size_t>(freqs.cols()));
  for (Eigen::Index j = 0; j < freqs.cols(); ++j)
    ms.representers.push_back(projector.reconstruct(freqs.col(j)));
  return ms;
}

FunctionalApproximant::FunctionalApproximant(Grid grid, int n, MeasurementSet measurements,
                                             std::vector<ZetaSpec> zetas, Eigen::MatrixXd freqs,
                                             CoverageData coverage, ApproximantInfo info)
    : grid_(grid),
      n_(n),
      measurements_(std::move(measurements)),
      zetas_(std::move(zetas)),
      freqs_(std::move(freqs)),
      coverage_(std::move(coverage)),
      info_(std::move(info)) {
  grid_.validate();
  if (n_ < 1) throw Error(ErrorCode::usage, "approximant needs at least one component");
  if (measurements_.size() != static_cast<int>(zetas_.size()))
    throw Error(ErrorCode::usage, "measurement and nonlinearity counts disagree");
  if (freqs_.size() > 0 && freqs_.cols() != static_cast<Eigen::Index>(zetas_.size()))
    throw Error(ErrorCode::usage, "frequency and nonlinearity counts disagree");
  for (const auto& h : measurements_.representers) {
    require_same_grid(grid_, h.grid());
    if (h.n() != n_) throw Error(ErrorCode::usage, "representer has the wrong component count");
  }
}

double FunctionalApproximant::evaluate(const ProductPoint& x) const {
  require_same_grid(grid_, x.grid());
  if (x.n() != n_) throw Error(ErrorCode::usage, "operands have different component counts");
  double acc = 0.0;
  for (std::size_t j = 0; j < zetas_.size(); ++j)
    acc += zetas_[j].amplitude *
           zeta_base(zetas_[j].kind, measurements_.phi(static_cast<int>(j), x));
  return acc;
}

Eigen::VectorXd FunctionalApproximant::coords(const ProductPoint& x) const {
  if (coverage_.basis.size() == 0)
    throw Error(ErrorCode::usage, "model carries no coverage data");
  require_same_grid(grid_, x.grid());
  if (x.n() != n_) throw Error(ErrorCode::usage, "operands have different component counts");
  return grid_.weight() * (coverage_.basis.transpose() * x.flat());
}

double FunctionalApproximant::coverage_distance(const ProductPoint& x) const {
  const Eigen::VectorXd y = coords(x);
  double dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < coverage_.center_coords.rows(); ++k)
    dmin = std::min(dmin, (coverage_.center_coords.row(k).transpose() - y).norm());
  return dmin;
}

bool FunctionalApproximant::covered(const ProductPoint& x) const {
  return coverage_distance(x) < coverage_.radius;
}

FunctionalApproximant build_approximant_values(const Eigen::VectorXd& f_train,
                                               const Eigen::VectorXd& f_val,
                                               const SampleSet& train, const SampleSet& val,
                                               double epsilon, const BuildConfig& config,
                                               std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::usage, "epsilon must be positive");
  if (train.points.empty()) throw Error(ErrorCode::usage, "training set is empty");
  if (f_train.size() != train.size())
    throw Error(ErrorCode::usage, "training value count does not match the samples");
  const bool has_val = !val.points.empty();
  if (has_val) {
    require_same_shape(train.points.front(), val.points.front());
    if (f_val.size() != val.size())
      throw Error(ErrorCode::usage, "validation value count does not match the samples");
  } else if (f_val.size() != 0) {
    throw Error(ErrorCode::usage, "validation values given without validation samples");
  }

  const ModulusEstimate modulus =
      estimate_modulus_values(f_train, train, config.pair_budget, derive_seed(seed, 1));
  const double delta = choose_delta(modulus, epsilon);

  const Net net = greedy_net(train, delta / 3.0);
  const int m = static_cast<int>(net.center_indices.size());
  std::vector<ProductPoint> centers;
  centers.reserve(static_cast<std::size_t>(m));
  Eigen::VectorXd center_values(m);
  for (int k = 0; k < m; ++k) {
    const int idx = net.center_indices[static_cast<std::size_t>(k)];
    centers.push_back(train.points[static_cast<std::size_t>(idx)]);
    center_values[k] = f_train[idx];
  }

  const Projector projector = build_projector(centers, config.rank_tol);
  const int d = projector.dim();

  Eigen::MatrixXd center_coords(m, d);
  for (int k = 0; k < m; ++k)
    center_coords.row(k) = projector.coords(centers[static_cast<std::size_t>(k)]).transpose();
  const double radius = 2.0 * delta / 3.0;
  const PartitionOfUnity pou(center_coords, radius, center_values);

  const int n_train = train.size();
  Eigen::MatrixXd Ytrain(n_train, d);
  double projection_max_train = 0.0;
  for (int i = 0; i < n_train; ++i) {
    const ProductPoint& x = train.points[static_cast<std::size_t>(i)];
    Ytrain.row(i) = projector.coords(x).transpose();
    projection_max_train = std::max(projection_max_train, projector.residual(x));
  }
  Eigen::VectorXd ttrain(n_train);
  for (int i = 0; i < n_train; ++i) ttrain[i] = pou.interpolant(Ytrain.row(i).transpose());

  std::vector<int> val_covered;
  Eigen::MatrixXd y_val_all(has_val ? val.size() : 0, d);
  int uncovered_val = 0;
  if (has_val) {
    for (int j = 0; j < val.size(); ++j) {
      y_val_all.row(j) = projector.coords(val.points[static_cast<std::size_t>(j)]).transpose();
      if (pou.covered(y_val_all.row(j).transpose()))
        val_covered.push_back(j);
      else
        ++uncovered_val;
    }
  }
  Eigen::MatrixXd Yval(static_cast<Eigen::Index>(val_covered.size()), d);
  Eigen::VectorXd tval(static_cast<Eigen::Index>(val_covered.size()));
  double interpolation_max_val = 0.0;
  for (std::size_t r = 0; r < val_covered.size(); ++r) {
    const int j = val_covered[r];
    Yval.row(static_cast<Eigen::Index>(r)) = y_val_all.row(j);
    const double blended = pou.interpolant(y_val_all.row(j).transpose());
    tval[static_cast<Eigen::Index>(r)] = blended;
    interpolation_max_val = std::max(interpolation_max_val, std::abs(blended - f_val[j]));
  }

  const FitResult fit_res =
      fit_auto(Ytrain, ttrain, Yval, tval, epsilon / 3.0, config.fit, derive_seed(seed, 2));

  MeasurementSet ms = lift_measurements(projector, fit_res.model.freqs);
  CoverageData coverage{projector.basis(), center_coords, center_values, radius};
  ApproximantInfo info;
  info.epsilon = epsilon;
  info.delta = delta;
  info.net_size = m;
  info.dim = d;
  info.terms = fit_res.model.terms();
  info.seed = seed;
  info.stages.projection_max_train = projection_max_train;
  info.stages.interpolation_max_val = interpolation_max_val;
  info.stages.ridge_max_train = fit_res.train_max_residual;
  info.stages.ridge_max_val = fit_res.val_max_residual;
  info.stages.uncovered_val = uncovered_val;
  info.stages.ridge_target_met = fit_res.target_met;

  FunctionalApproximant g(train.grid(), train.n(), std::move(ms), fit_res.model.zetas,
                          fit_res.model.freqs, std::move(coverage), std::move(info));
  double end_to_end = 0.0;
  for (int j : val_covered)
    end_to_end = std::max(
        end_to_end, std::abs(g.evaluate(val.points[static_cast<std::size_t>(j)]) - f_val[j]));
  g.info().stages.end_to_end_max_val = end_to_end;
  return g;
}

FunctionalApproximant build_approximant(const Functional& f, const SampleSet& train,
                                        const SampleSet& val, double epsilon,
                                        const BuildConfig& config, std::uint64_t seed) {
  const Eigen::VectorXd f_train = evaluate_all(f, train, config.parallel_eval);
  Eigen::VectorXd f_val;
  if (!val.points.empty()) f_val = evaluate_all(f, val, config.parallel_eval);
  return build_approximant_values(f_train, f_val, train, val, epsilon, config, seed);
}

ErrorReport sup_error(const Functional& f, const FunctionalApproximant& g, const SampleSet& test) {
  ErrorReport report;
  report.total = test.size();
  report.rows.reserve(static_cast<std::size_t>(test.size()));
  double sum = 0.0;
  int covered_count = 0;
  for (int i = 0; i < test.size(); ++i) {
    const ProductPoint& x = test.points[static_cast<std::size_t>(i)];
    const double fv = f(x);
    if (!std::isfinite(fv))
      throw Error(ErrorCode::evaluation, "functional returned a non-finite value", i);
    const double gv = g.evaluate(x);
    const bool cov = g.covered(x);
    const double err = std::abs(fv - gv);
    report.rows.push_back(PointRecord{i, fv, gv, err, cov});
    if (cov) {
      report.max_abs_error = std::max(report.max_abs_error, err);
      sum += err;
      ++covered_count;
    } else {
      ++report.uncovered;
    }
  }
  report.mean_abs_error = covered_count > 0 ? sum / covered_count : 0.0;
  return report;
}

}  // namespace supnet
