#include "supnet/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <utility>

#include "supnet/rng.hpp"

namespace supnet {

namespace {

std::vector<GridFunction> evaluate_map(const MapHandle& f, const SampleSet& samples,
                                       bool parallel) {
  const int N = samples.size();
  std::vector<GridFunction> out(static_cast<std::size_t>(N));
  auto run = [&](int i) { out[static_cast<std::size_t>(i)] = f(samples.points[static_cast<std::size_t>(i)]); };
  if (!parallel || N < 2) {
    for (int i = 0; i < N; ++i) run(i);
  } else {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(N)));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < N; i += workers) run(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (int i = 0; i < N; ++i) {
    const auto& z = out[static_cast<std::size_t>(i)];
    if (!z.values().allFinite())
      throw Error(ErrorCode::evaluation, "map returned a non-finite value", i);
    require_same_grid(out.front().grid(), z.grid());
  }
  return out;
}

}  // namespace

RangeNet build_range_net(const std::vector<GridFunction>& outputs, double radius) {
  if (outputs.empty()) throw Error(ErrorCode::usage, "range net needs at least one output");
  if (!(radius > 0.0)) throw Error(ErrorCode::usage, "net radius must be positive");
  const int N = static_cast<int>(outputs.size());
  for (const auto& z : outputs) require_same_grid(outputs.front().grid(), z.grid());
  std::vector<int> centers{0};
  Eigen::VectorXd dist(N);
  for (int i = 0; i < N; ++i) dist[i] = norm(outputs[static_cast<std::size_t>(i)] - outputs[0]);
  for (;;) {
    int farthest = 0;
    for (int i = 1; i < N; ++i)
      if (dist[i] > dist[farthest]) farthest = i;
    if (dist[farthest] < radius) break;
    centers.push_back(farthest);
    const GridFunction& c = outputs[static_cast<std::size_t>(farthest)];
    for (int i = 0; i < N; ++i)
      dist[i] = std::min(dist[i], norm(outputs[static_cast<std::size_t>(i)] - c));
  }
  RangeNet net;
  net.radius = radius;
  net.templates.reserve(centers.size());
  for (int c : centers) net.templates.push_back(outputs[static_cast<std::size_t>(c)]);
  return net;
}

double range_net_min_distance(const RangeNet& net, const GridFunction& z) {
  if (net.templates.empty()) throw Error(ErrorCode::usage, "range net has no templates");
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& t : net.templates) dmin = std::min(dmin, norm(z - t));
  return dmin;
}

Eigen::VectorXd range_pou_weights(const RangeNet& net, const GridFunction& z) {
  if (net.templates.empty()) throw Error(ErrorCode::usage, "range net has no templates");
  const int m = static_cast<int>(net.templates.size());
  Eigen::VectorXd hats(m);
  double sum = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const double dist = norm(z - net.templates[static_cast<std::size_t>(k)]);
    dmin = std::min(dmin, dist);
    const double hat = std::max(0.0, 1.0 - dist / net.radius);
    hats[k] = hat;
    sum += hat;
  }
  if (sum <= 0.0)
    throw Error(ErrorCode::uncovered, "output lies outside every range bump", -1, dmin);
  return hats / sum;
}

GridFunction range_pou_project(const RangeNet& net, const GridFunction& z) {
  const Eigen::VectorXd w = range_pou_weights(net, z);
  GridFunction out = GridFunction::zero(z.grid());
  for (int k = 0; k < w.size(); ++k)
    out.values() += w[k] * net.templates[static_cast<std::size_t>(k)].values();
  return out;
}

RangeBasis::RangeBasis(Grid grid, Eigen::MatrixXd basis) : grid_(grid), basis_(std::move(basis)) {
  grid_.validate();
  if (basis_.cols() < 1) throw Error(ErrorCode::degenerate, "range basis is empty");
  if (basis_.rows() != grid_.nodes())
    throw Error(ErrorCode::usage, "basis rows do not match the grid");
}

Eigen::VectorXd RangeBasis::coords(const GridFunction& z) const {
  require_same_grid(grid_, z.grid());
  return grid_.weight() * (basis_.transpose() * z.values());
}

GridFunction RangeBasis::synthesize(const Eigen::VectorXd& c) const {
  if (c.size() != basis_.cols())
    throw Error(ErrorCode::usage, "coordinate vector does not match the basis dimension");
  return GridFunction(grid_, basis_ * c);
}

GridFunction RangeBasis::basis_vector(int ell) const {
  if (ell < 0 || ell >= dim()) throw Error(ErrorCode::usage, "basis index out of range", ell);
  return synthesize(Eigen::VectorXd::Unit(dim(), ell));
}

RangeBasis build_range_basis(const std::vector<GridFunction>& templates, double rank_tol) {
  if (templates.empty()) throw Error(ErrorCode::usage, "range basis needs at least one template");
  std::vector<ProductPoint> pts;
  pts.reserve(templates.size());
  for (const auto& t : templates) pts.emplace_back(t.grid(), Eigen::MatrixXd(t.values()));
  const Projector proj = build_projector(pts, rank_tol);
  return RangeBasis(templates.front().grid(), proj.basis());
}

FiniteRankOperator::FiniteRankOperator(Grid in_grid, int n, Grid range_grid,
                                       std::vector<GridFunction> atoms,
                                       std::vector<ZetaSpec> zetas, MeasurementSet measurements,
                                       OperatorInfo info)
    : in_grid_(in_grid),
      n_(n),
      range_grid_(range_grid),
      atoms_(std::move(atoms)),
      zetas_(std::move(zetas)),
      measurements_(std::move(measurements)),
      info_(std::move(info)) {
  in_grid_.validate();
  range_grid_.validate();
  if (n_ < 1) throw Error(ErrorCode::usage, "operator needs at least one component");
  if (atoms_.size() != zetas_.size() ||
      static_cast<int>(atoms_.size()) != measurements_.size())
    throw Error(ErrorCode::usage, "atom, nonlinearity and measurement counts disagree");
  for (const auto& a : atoms_) require_same_grid(range_grid_, a.grid());
  for (const auto& h : measurements_.representers) {
    require_same_grid(in_grid_, h.grid());
    if (h.n() != n_) throw Error(ErrorCode::usage, "representer has the wrong component count");
  }
}

GridFunction FiniteRankOperator::apply(const ProductPoint& x) const {
  require_same_grid(in_grid_, x.grid());
  if (x.n() != n_) throw Error(ErrorCode::usage, "operands have different component counts");
  GridFunction out = GridFunction::zero(range_grid_);
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    const double s = zeta_base(zetas_[j].kind, measurements_.phi(static_cast<int>(j), x));
    out.values() += (zetas_[j].amplitude * s) * atoms_[j].values();
  }
  return out;
}

bool FiniteRankOperator::covered(const ProductPoint& x) const {
  if (coordinate_models_.empty())
    throw Error(ErrorCode::usage, "operator carries no coverage data");
  for (const auto& g : coordinate_models_)
    if (!g.covered(x)) return false;
  return true;
}

void FiniteRankOperator::attach_build_data(std::vector<FunctionalApproximant> coordinate_models,
                                           RangeNet net) {
  coordinate_models_ = std::move(coordinate_models);
  range_net_ = std::move(net);
}

FiniteRankOperator build_operator(const MapHandle& f, const SampleSet& train,
                                  const SampleSet& val, double epsilon,
                                  const OperatorConfig& config, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::usage, "epsilon must be positive");
  if (train.points.empty()) throw Error(ErrorCode::usage, "training set is empty");
  const bool has_val = !val.points.empty();
  if (has_val) require_same_shape(train.points.front(), val.points.front());

  const std::vector<GridFunction> z_train = evaluate_map(f, train, config.parallel_eval);
  const std::vector<GridFunction> z_val =
      has_val ? evaluate_map(f, val, config.parallel_eval) : std::vector<GridFunction>{};
  const Grid range_grid = z_train.front().grid();

  const RangeNet rnet = build_range_net(z_train, epsilon / 3.0);
  const RangeBasis basis = build_range_basis(rnet.templates, config.range_rank_tol);
  const int d = basis.dim();
  const double budget = epsilon / (3.0 * d);

  const int n_train = train.size();
  Eigen::MatrixXd c_train(n_train, d);
  double pou_max_train = 0.0;
  for (int i = 0; i < n_train; ++i) {
    const GridFunction& z = z_train[static_cast<std::size_t>(i)];
    const GridFunction proj = range_pou_project(rnet, z);
    pou_max_train = std::max(pou_max_train, norm(proj - z));
    c_train.row(i) = basis.coords(proj).transpose();
  }

  std::vector<int> val_keep;
  double pou_max_val = 0.0;
  std::vector<Eigen::VectorXd> c_val_rows;
  if (has_val) {
    for (int j = 0; j < val.size(); ++j) {
      const GridFunction& z = z_val[static_cast<std::size_t>(j)];
      if (range_net_min_distance(rnet, z) >= rnet.radius) continue;
      const GridFunction proj = range_pou_project(rnet, z);
      pou_max_val = std::max(pou_max_val, norm(proj - z));
      val_keep.push_back(j);
      c_val_rows.push_back(basis.coords(proj));
    }
  }
  SampleSet val_kept;
  Eigen::MatrixXd c_val(static_cast<Eigen::Index>(val_keep.size()), d);
  if (!val_keep.empty()) {
    std::vector<ProductPoint> pts;
    pts.reserve(val_keep.size());
    for (std::size_t r = 0; r < val_keep.size(); ++r) {
      pts.push_back(val.points[static_cast<std::size_t>(val_keep[r])]);
      c_val.row(static_cast<Eigen::Index>(r)) = c_val_rows[r].transpose();
    }
    val_kept = SampleSet(std::move(pts), "range-covered validation");
  }

  std::vector<FunctionalApproximant> coord_models;
  coord_models.reserve(static_cast<std::size_t>(d));
  std::vector<CoordinateSummary> summaries;
  double sum_coordinate_max = 0.0;
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd tv;
    if (!val_keep.empty()) tv = c_val.col(l);
    FunctionalApproximant g = build_approximant_values(
        c_train.col(l), tv, train, val_kept, budget, config.scalar,
        derive_seed(seed, 100 + static_cast<std::uint64_t>(l)));
    CoordinateSummary cs;
    cs.epsilon = budget;
    cs.delta = g.info().delta;
    cs.net_size = g.info().net_size;
    cs.dim = g.info().dim;
    cs.terms = g.info().terms;
    cs.stages = g.info().stages;
    summaries.push_back(cs);
    sum_coordinate_max += g.info().stages.end_to_end_max_val;
    coord_models.push_back(std::move(g));
  }

  std::vector<GridFunction> atoms;
  std::vector<ZetaSpec> zetas;
  MeasurementSet ms;
  for (int l = 0; l < d; ++l) {
    const GridFunction w_l = basis.basis_vector(l);
    const FunctionalApproximant& gl = coord_models[static_cast<std::size_t>(l)];
    for (std::size_t t = 0; t < gl.zetas().size(); ++t) {
      atoms.push_back(gl.zetas()[t].amplitude * w_l);
      zetas.push_back(ZetaSpec{gl.zetas()[t].kind, 1.0});
      ms.representers.push_back(gl.measurements().representers[t]);
    }
  }

  OperatorInfo info;
  info.epsilon = epsilon;
  info.range_net_size = static_cast<int>(rnet.templates.size());
  info.range_dim = d;
  info.atoms = static_cast<int>(atoms.size());
  info.coordinate_budget = budget;
  info.range_pou_max_train = pou_max_train;
  info.range_pou_max_val = pou_max_val;
  info.sum_coordinate_max = sum_coordinate_max;
  info.seed = seed;
  info.coordinates = std::move(summaries);

  FiniteRankOperator op(train.grid(), train.n(), range_grid, std::move(atoms), std::move(zetas),
                        std::move(ms), std::move(info));

  double end_to_end = 0.0;
  int uncovered_val = 0;
  if (has_val) {
    std::vector<char> range_ok(static_cast<std::size_t>(val.size()), 0);
    for (int j : val_keep) range_ok[static_cast<std::size_t>(j)] = 1;
    for (int j = 0; j < val.size(); ++j) {
      bool ok = range_ok[static_cast<std::size_t>(j)] != 0;
      for (int l = 0; ok && l < d; ++l)
        ok = coord_models[static_cast<std::size_t>(l)].covered(
            val.points[static_cast<std::size_t>(j)]);
      if (!ok) {
        ++uncovered_val;
        continue;
      }
      const GridFunction gz = op.apply(val.points[static_cast<std::size_t>(j)]);
      end_to_end = std::max(end_to_end, norm(gz - z_val[static_cast<std::size_t>(j)]));
    }
  }
  op.info().end_to_end_max_val = end_to_end;
  op.info().uncovered_val = uncovered_val;
  op.attach_build_data(std::move(coord_models), rnet);
  return op;
}

OperatorReport operator_error(const MapHandle& f, const FiniteRankOperator& g,
                              const SampleSet& test) {
  if (!g.has_coverage_data())
    throw Error(ErrorCode::usage, "operator carries no coverage data");
  OperatorReport report;
  report.total = test.size();
  report.rows.reserve(static_cast<std::size_t>(test.size()));
  double sum = 0.0;
  int covered_count = 0;
  for (int i = 0; i < test.size(); ++i) {
    const ProductPoint& x = test.points[static_cast<std::size_t>(i)];
    GridFunction z = f(x);
    if (!z.values().allFinite())
      throw Error(ErrorCode::evaluation, "map returned a non-finite value", i);
    const GridFunction gz = g.apply(x);
    const bool cov = range_net_min_distance(g.range_net(), z) < g.range_net().radius &&
                     g.covered(x);
    const double err = norm(z - gz);
    report.rows.push_back(OpPointRecord{i, norm(z), norm(gz), err, cov});
    if (cov) {
      report.max_y_error = std::max(report.max_y_error, err);
      sum += err;
      ++covered_count;
    } else {
      ++report.uncovered;
    }
  }
  report.mean_y_error = covered_count > 0 ? sum / covered_count : 0.0;
  return report;
}

}  // namespace supnet
