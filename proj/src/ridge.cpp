#include "supnet/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "supnet/rng.hpp"

namespace supnet {

const char* zeta_kind_name(ZetaKind kind) {
  switch (kind) {
    case ZetaKind::cosine: return "cos";
    case ZetaKind::sine: return "sin";
    case ZetaKind::identity: return "id";
  }
  throw Error(ErrorCode::usage, "unknown nonlinearity kind");
}

ZetaKind zeta_kind_from_name(const std::string& name) {
  if (name == "cos") return ZetaKind::cosine;
  if (name == "sin") return ZetaKind::sine;
  if (name == "id") return ZetaKind::identity;
  throw Error(ErrorCode::usage, "unknown nonlinearity kind: " + name);
}

double zeta_base(ZetaKind kind, double s) {
  switch (kind) {
    case ZetaKind::cosine: return std::cos(s);
    case ZetaKind::sine: return std::sin(s);
    case ZetaKind::identity: return s;
  }
  throw Error(ErrorCode::usage, "unknown nonlinearity kind");
}

double RidgeModel::eval(const Eigen::VectorXd& y) const {
  if (y.size() != freqs.rows())
    throw Error(ErrorCode::usage, "query dimension does not match the model");
  if (static_cast<int>(zetas.size()) != freqs.cols())
    throw Error(ErrorCode::usage, "model terms and frequencies disagree");
  double acc = 0.0;
  for (int j = 0; j < freqs.cols(); ++j)
    acc += zetas[static_cast<std::size_t>(j)].amplitude *
           zeta_base(zetas[static_cast<std::size_t>(j)].kind, freqs.col(j).dot(y));
  return acc;
}

Eigen::VectorXd RidgeModel::eval_rows(const Eigen::MatrixXd& Y) const {
  if (Y.cols() != freqs.rows())
    throw Error(ErrorCode::usage, "query dimension does not match the model");
  Eigen::VectorXd out(Y.rows());
  for (Eigen::Index i = 0; i < Y.rows(); ++i) out[i] = eval(Y.row(i).transpose());
  return out;
}

Eigen::MatrixXd sample_frequencies(int d, int count, double scale, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::usage, "frequency dimension must be positive");
  if (count < 0) throw Error(ErrorCode::usage, "frequency count must be nonnegative");
  if (!(scale > 0.0)) throw Error(ErrorCode::usage, "frequency scale must be positive");
  Eigen::MatrixXd freqs(d, count + 1);
  freqs.col(0).setZero();
  auto eng = seeded_engine(seed, 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 1; j <= count; ++j)
    for (int i = 0; i < d; ++i) freqs(i, j) = scale * gauss(eng);
  return freqs;
}

namespace {

struct TermLayout {
  ZetaKind kind;
  int source;  // identity -> coordinate index, cos/sin -> frequency column
};

std::vector<TermLayout> term_layout(const Eigen::MatrixXd& freqs, int d, bool identity_terms) {
  std::vector<TermLayout> layout;
  layout.reserve(static_cast<std::size_t>((identity_terms ? d : 0) + 2 * freqs.cols()));
  if (identity_terms)
    for (int l = 0; l < d; ++l) layout.push_back({ZetaKind::identity, l});
  for (int j = 0; j < freqs.cols(); ++j) {
    layout.push_back({ZetaKind::cosine, j});
    if (!freqs.col(j).isZero(0.0)) layout.push_back({ZetaKind::sine, j});
  }
  return layout;
}

}  // namespace

RidgeModel fit(const Eigen::MatrixXd& Y, const Eigen::VectorXd& targets,
               const Eigen::MatrixXd& freqs, double reg, bool identity_terms) {
  const Eigen::Index N = Y.rows();
  const Eigen::Index d = Y.cols();
  if (N < 1) throw Error(ErrorCode::usage, "fit needs at least one sample");
  if (targets.size() != N) throw Error(ErrorCode::usage, "target count does not match the samples");
  if (freqs.rows() != d) throw Error(ErrorCode::usage, "frequency dimension does not match the samples");
  if (reg < 0.0) throw Error(ErrorCode::usage, "regularization must be nonnegative");

  const auto layout = term_layout(freqs, static_cast<int>(d), identity_terms);
  const Eigen::Index T = static_cast<Eigen::Index>(layout.size());
  if (T < 1) throw Error(ErrorCode::usage, "fit needs at least one term");

  const Eigen::MatrixXd S = Y * freqs;  // N x F inner products
  Eigen::MatrixXd A(N, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto& term = layout[static_cast<std::size_t>(t)];
    switch (term.kind) {
      case ZetaKind::identity: A.col(t) = Y.col(term.source); break;
      case ZetaKind::cosine: A.col(t) = S.col(term.source).array().cos(); break;
      case ZetaKind::sine: A.col(t) = S.col(term.source).array().sin(); break;
    }
  }

  Eigen::MatrixXd G = A.transpose() * A;
  const Eigen::VectorXd b = A.transpose() * targets;
  const double reg_eff = reg * std::max(1.0, G.trace() / static_cast<double>(T));
  G.diagonal().array() += reg_eff;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  const Eigen::VectorXd amp = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success || !amp.allFinite())
    throw Error(ErrorCode::ill_conditioned, "least-squares solve failed");
  const double relres = (G * amp - b).norm() / std::max(1.0, b.norm());
  if (relres > 1e-6)
    throw Error(ErrorCode::ill_conditioned, "normal equations solved inaccurately", -1, relres);

  RidgeModel model;
  model.freqs.resize(d, T);
  model.zetas.resize(static_cast<std::size_t>(T));
  model.includes_constant = false;
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto& term = layout[static_cast<std::size_t>(t)];
    if (term.kind == ZetaKind::identity)
      model.freqs.col(t) = Eigen::VectorXd::Unit(d, term.source);
    else
      model.freqs.col(t) = freqs.col(term.source);
    if (term.kind == ZetaKind::cosine && freqs.col(term.source).isZero(0.0))
      model.includes_constant = true;
    model.zetas[static_cast<std::size_t>(t)] = ZetaSpec{term.kind, amp[t]};
  }
  return model;
}

double median_pairwise_distance(const Eigen::MatrixXd& Y) {
  const Eigen::Index N = Y.rows();
  if (N < 2) return 0.0;
  const Eigen::Index cap = 256;
  std::vector<Eigen::Index> idx;
  const Eigen::Index stride = std::max<Eigen::Index>(1, N / cap);
  for (Eigen::Index i = 0; i < N; i += stride) idx.push_back(i);
  std::vector<double> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      dists.push_back((Y.row(idx[a]) - Y.row(idx[b])).norm());
  if (dists.empty()) return 0.0;
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  return dists[mid];
}

FitResult fit_auto(const Eigen::MatrixXd& Ytrain, const Eigen::VectorXd& ttrain,
                   const Eigen::MatrixXd& Yval, const Eigen::VectorXd& tval, double target_err,
                   const FitConfig& config, std::uint64_t seed) {
  if (!(target_err > 0.0)) throw Error(ErrorCode::usage, "target error must be positive");
  if (config.r0 < 0 || config.r_max < config.r0)
    throw Error(ErrorCode::usage, "frequency schedule must satisfy 0 <= r0 <= r_max");
  if (ttrain.size() != Ytrain.rows())
    throw Error(ErrorCode::usage, "target count does not match the samples");
  const bool use_val = Yval.rows() > 0;
  if (use_val && (Yval.cols() != Ytrain.cols() || tval.size() != Yval.rows()))
    throw Error(ErrorCode::usage, "validation set does not match the training set");

  double scale = config.scale;
  if (!(scale > 0.0)) {
    const double h = median_pairwise_distance(Ytrain);
    scale = h > 0.0 ? 1.0 / h : 1.0;
  }
  const Eigen::MatrixXd all_freqs =
      sample_frequencies(static_cast<int>(Ytrain.cols()), config.r_max, scale, seed);

  FitResult best;
  best.scale = scale;
  bool have_best = false;
  double best_crit = 0.0;
  int r = std::min(config.r0, config.r_max);
  for (;;) {
    RidgeModel model;
    try {
      model = fit(Ytrain, ttrain, all_freqs.leftCols(r + 1), config.reg, config.identity_terms);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ill_conditioned && have_best) break;
      throw;
    }
    const double train_res = (model.eval_rows(Ytrain) - ttrain).cwiseAbs().maxCoeff();
    const double val_res = use_val ? (model.eval_rows(Yval) - tval).cwiseAbs().maxCoeff() : train_res;
    const double crit = use_val ? val_res : train_res;
    if (!have_best || crit < best_crit) {
      best.model = std::move(model);
      best.train_max_residual = train_res;
      best.val_max_residual = val_res;
      best.freq_count = r;
      best_crit = crit;
      have_best = true;
    }
    if (best_crit <= target_err || r >= config.r_max) break;
    r = std::min(2 * std::max(r, 1), config.r_max);
  }
  best.target_met = have_best && best_crit <= target_err;
  return best;
}

}  // namespace supnet
