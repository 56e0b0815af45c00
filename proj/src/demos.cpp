#include "supnet/demos.hpp"

#include <algorithm>
#include <cmath>

#include "supnet/rng.hpp"

namespace supnet {

std::string family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::fourier_band: return "fourier_band";
    case FamilyKind::bump_mixture: return "bump_mixture";
    case FamilyKind::image_phantom: return "image_phantom";
  }
  throw Error(ErrorCode::usage, "unknown family kind");
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "fourier_band") return FamilyKind::fourier_band;
  if (name == "bump_mixture") return FamilyKind::bump_mixture;
  if (name == "image_phantom") return FamilyKind::image_phantom;
  throw Error(ErrorCode::usage, "unknown family kind: " + name);
}

std::string phi_kind_name(PhiKind kind) {
  switch (kind) {
    case PhiKind::product: return "product";
    case PhiKind::squares: return "squares";
    case PhiKind::clipped: return "clipped";
  }
  throw Error(ErrorCode::usage, "unknown integrand kind");
}

PhiKind phi_kind_from_name(const std::string& name) {
  if (name == "product") return PhiKind::product;
  if (name == "squares") return PhiKind::squares;
  if (name == "clipped") return PhiKind::clipped;
  throw Error(ErrorCode::usage, "unknown integrand kind: " + name);
}

FamilySpec FamilySpec::defaults(FamilyKind kind) {
  FamilySpec spec;
  spec.kind = kind;
  if (kind == FamilyKind::image_phantom) {
    spec.n = 1;
    spec.m = 16;
  }
  return spec;
}

namespace {

double interval_abs_max(const Interval& iv) { return std::max(std::abs(iv.lo), std::abs(iv.hi)); }

void validate_spec(const FamilySpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::usage, "family needs at least one component");
  if (spec.m < 1) throw Error(ErrorCode::usage, "family needs at least one grid point per axis");
  if (spec.kind == FamilyKind::fourier_band &&
      (spec.sin_coef.size() != 3 || spec.cos_coef.size() != 3))
    throw Error(ErrorCode::usage, "band family takes exactly three sine and cosine ranges");
  if (spec.kind == FamilyKind::bump_mixture) {
    if (spec.bumps < 1 || spec.bumps > 3)
      throw Error(ErrorCode::usage, "bump family supports one to three bumps");
    if (!(spec.bump_width.lo > 0.0))
      throw Error(ErrorCode::usage, "bump widths must be positive");
  }
  for (const Interval* iv :
       {&spec.bump_height, &spec.bump_width, &spec.bump_center, &spec.rect1_intensity,
        &spec.rect2_intensity, &spec.rect1_x, &spec.rect1_y, &spec.rect2_x, &spec.rect2_y})
    if (iv->hi < iv->lo) throw Error(ErrorCode::usage, "parameter range has hi < lo");
  for (const auto& iv : spec.sin_coef)
    if (iv.hi < iv.lo) throw Error(ErrorCode::usage, "parameter range has hi < lo");
  for (const auto& iv : spec.cos_coef)
    if (iv.hi < iv.lo) throw Error(ErrorCode::usage, "parameter range has hi < lo");
}

}  // namespace

double FamilySpec::norm_bound() const {
  validate_spec(*this);
  double sup = 0.0;
  switch (kind) {
    case FamilyKind::fourier_band:
      for (int k = 0; k < 3; ++k)
        sup += interval_abs_max(sin_coef[static_cast<std::size_t>(k)]) +
               interval_abs_max(cos_coef[static_cast<std::size_t>(k)]);
      break;
    case FamilyKind::bump_mixture:
      sup = bumps * interval_abs_max(bump_height);
      break;
    case FamilyKind::image_phantom:
      sup = interval_abs_max(rect1_intensity) + interval_abs_max(rect2_intensity);
      break;
  }
  return std::sqrt(static_cast<double>(n)) * sup;
}

namespace {

using Draw = std::function<double(const Interval&)>;

void fill_fourier(const FamilySpec& spec, const Grid& grid, const Draw& draw,
                  Eigen::Ref<Eigen::VectorXd> out) {
  double a[3], b[3];
  for (int k = 0; k < 3; ++k) a[k] = draw(spec.sin_coef[static_cast<std::size_t>(k)]);
  for (int k = 0; k < 3; ++k) b[k] = draw(spec.cos_coef[static_cast<std::size_t>(k)]);
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < grid.m; ++i) {
    const double x = grid.axis_coord(i);
    double v = 0.0;
    for (int k = 0; k < 3; ++k)
      v += a[k] * std::sin(two_pi * (k + 1) * x) + b[k] * std::cos(two_pi * (k + 1) * x);
    out[i] = v;
  }
}

void fill_bumps(const FamilySpec& spec, const Grid& grid, const Draw& draw,
                Eigen::Ref<Eigen::VectorXd> out) {
  out.setZero();
  for (int b = 0; b < spec.bumps; ++b) {
    const double c = draw(spec.bump_center);
    const double w = draw(spec.bump_width);
    const double h = draw(spec.bump_height);
    for (int i = 0; i < grid.m; ++i) {
      const double x = grid.axis_coord(i);
      out[i] += h * std::max(0.0, 1.0 - std::abs(x - c) / w);
    }
  }
}

void fill_phantom(const FamilySpec& spec, const Grid& grid, const Draw& draw,
                  Eigen::Ref<Eigen::VectorXd> out) {
  const double i1 = draw(spec.rect1_intensity);
  const double i2 = draw(spec.rect2_intensity);
  auto inside = [](double a, const Interval& iv) { return a >= iv.lo && a <= iv.hi; };
  for (int iy = 0; iy < grid.m; ++iy) {
    const double ay = grid.axis_coord(iy);
    for (int ix = 0; ix < grid.m; ++ix) {
      const double ax = grid.axis_coord(ix);
      double v = 0.0;
      if (inside(ax, spec.rect1_x) && inside(ay, spec.rect1_y)) v += i1;
      if (inside(ax, spec.rect2_x) && inside(ay, spec.rect2_y)) v += i2;
      out[grid.index2(ix, iy)] = v;
    }
  }
}

SampleSet generate_set(const FamilySpec& spec, int count, std::uint64_t seed,
                       std::uint64_t stream, const std::string& label) {
  SampleSet out;
  out.label = label;
  if (count == 0) return out;
  const Grid grid = spec.grid();
  auto eng = seeded_engine(seed, stream);
  auto u01 = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
  Draw draw = [&u01](const Interval& iv) { return iv.lo + u01() * (iv.hi - iv.lo); };
  out.points.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::MatrixXd values(grid.nodes(), spec.n);
    for (int c = 0; c < spec.n; ++c) {
      switch (spec.kind) {
        case FamilyKind::fourier_band: fill_fourier(spec, grid, draw, values.col(c)); break;
        case FamilyKind::bump_mixture: fill_bumps(spec, grid, draw, values.col(c)); break;
        case FamilyKind::image_phantom: fill_phantom(spec, grid, draw, values.col(c)); break;
      }
    }
    out.points.emplace_back(grid, std::move(values));
  }
  return out;
}

}  // namespace

FamilySets generate_family(const FamilySpec& spec, int n_train, int n_val, int n_test,
                           std::uint64_t seed) {
  validate_spec(spec);
  if (n_train < 1) throw Error(ErrorCode::usage, "family needs at least one training sample");
  if (n_val < 0 || n_test < 0)
    throw Error(ErrorCode::usage, "sample counts must be nonnegative");
  FamilySets sets;
  sets.train = generate_set(spec, n_train, seed, 1, "train");
  sets.val = generate_set(spec, n_val, seed, 2, "val");
  sets.test = generate_set(spec, n_test, seed, 3, "test");
  return sets;
}

Functional integral_functional(PhiKind phi) {
  return [phi](const ProductPoint& x) -> double {
    const Eigen::VectorXd u = x.mat().col(0);
    const Eigen::VectorXd v = x.mat().col(x.n() >= 2 ? 1 : 0);
    double s = 0.0;
    switch (phi) {
      case PhiKind::product: s = u.cwiseProduct(v).sum(); break;
      case PhiKind::squares: s = (u.array().square() + v.array().square()).sum(); break;
      case PhiKind::clipped:
        s = (u.array().square() + v.array().square()).min(1.0).sum();
        break;
    }
    return x.grid().weight() * s;
  };
}

Eigen::VectorXd Tomography::sums(const GridFunction& u) const {
  if (grid.dim != 2) throw Error(ErrorCode::usage, "bin sums need a 2-d grid");
  require_same_grid(grid, u.grid());
  if (bins < 1 || bins > grid.m)
    throw Error(ErrorCode::usage, "bin count must lie between 1 and the grid size");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  const double w = grid.weight();
  const int m = grid.m;
  const long diag_span = 2L * m - 1;
  for (int iy = 0; iy < m; ++iy) {
    for (int ix = 0; ix < m; ++ix) {
      const double mass = w * u.values()[grid.index2(ix, iy)];
      const int row_bin = static_cast<int>((static_cast<long>(iy) * bins) / m);
      const int col_bin = static_cast<int>((static_cast<long>(ix) * bins) / m);
      const int diag_bin = static_cast<int>((static_cast<long>(ix + iy) * bins) / diag_span);
      const int anti_bin =
          static_cast<int>((static_cast<long>(ix - iy + m - 1) * bins) / diag_span);
      out[row_bin] += mass;
      out[bins + col_bin] += mass;
      out[2 * bins + diag_bin] += mass;
      out[3 * bins + anti_bin] += mass;
    }
  }
  return out;
}

Functional tomography_functional(const Tomography& tomo, int which) {
  tomo.grid.validate();
  if (which < 0 || which >= tomo.size())
    throw Error(ErrorCode::usage, "bin index out of range", which);
  return [tomo, which](const ProductPoint& x) { return tomo.sums(x.component(0))[which]; };
}

namespace {

int reflect_index(int t, int m) {
  while (t < 0 || t >= m) {
    if (t < 0)
      t = -1 - t;
    else
      t = 2 * m - 1 - t;
  }
  return t;
}

}  // namespace

GridFunction blur_apply(const GridFunction& u, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::usage, "blur width must be positive");
  const Grid grid = u.grid();
  const int m = grid.m;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  if (radius > m - 1)
    throw Error(ErrorCode::usage, "blur radius exceeds the grid extent", radius);
  Eigen::VectorXd taps(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k)
    taps[k + radius] = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
  taps /= taps.sum();

  Eigen::VectorXd vals = u.values();
  Eigen::VectorXd line(m);
  auto pass = [&](int stride, int lines, int line_stride) {
    for (int L = 0; L < lines; ++L) {
      const int base = L * line_stride;
      for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k)
          acc += taps[k + radius] * vals[base + reflect_index(i + k, m) * stride];
        line[i] = acc;
      }
      for (int i = 0; i < m; ++i) vals[base + i * stride] = line[i];
    }
  };
  if (grid.dim == 1) {
    pass(1, 1, 0);
  } else {
    pass(1, m, m);  // along x, one line per row
    pass(m, m, 1);  // along y, one line per column
  }
  return GridFunction(grid, std::move(vals));
}

MapHandle blur_operator(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::usage, "blur width must be positive");
  return [sigma](const ProductPoint& x) { return blur_apply(x.component(0), sigma); };
}

}  // namespace supnet
