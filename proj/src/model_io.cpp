#include "supnet/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace supnet {

namespace {

using nlohmann::json;

json grid_to_json(const Grid& grid) { return json{{"dim", grid.dim}, {"m", grid.m}}; }

Grid grid_from_json(const json& j) {
  Grid grid;
  grid.dim = j.at("dim").get<int>();
  grid.m = j.at("m").get<int>();
  grid.validate();
  return grid;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, Eigen::Index expect = -1) {
  if (!j.is_array()) throw Error(ErrorCode::io, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  if (expect >= 0 && v.size() != expect)
    throw Error(ErrorCode::io, "array has the wrong length", static_cast<long>(v.size()));
  return v;
}

json columns_to_json(const Eigen::MatrixXd& mat) {
  json out = json::array();
  for (Eigen::Index c = 0; c < mat.cols(); ++c) out.push_back(vector_to_json(mat.col(c)));
  return out;
}

Eigen::MatrixXd columns_from_json(const json& j, Eigen::Index rows) {
  if (!j.is_array()) throw Error(ErrorCode::io, "expected an array of arrays");
  Eigen::MatrixXd mat(rows, static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c)
    mat.col(static_cast<Eigen::Index>(c)) = vector_from_json(j[c], rows);
  return mat;
}

json rows_to_json(const Eigen::MatrixXd& mat) {
  json out = json::array();
  for (Eigen::Index r = 0; r < mat.rows(); ++r)
    out.push_back(vector_to_json(mat.row(r).transpose()));
  return out;
}

Eigen::MatrixXd rows_from_json(const json& j, Eigen::Index cols) {
  if (!j.is_array()) throw Error(ErrorCode::io, "expected an array of arrays");
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r)
    mat.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r], cols).transpose();
  return mat;
}

json point_to_json(const ProductPoint& x) { return columns_to_json(x.mat()); }

ProductPoint point_from_json(const json& j, const Grid& grid, int n) {
  const Eigen::MatrixXd mat = columns_from_json(j, grid.nodes());
  if (mat.cols() != n)
    throw Error(ErrorCode::io, "point has the wrong component count", mat.cols());
  return ProductPoint(grid, mat);
}

json stages_to_json(const StageResiduals& st) {
  return json{{"projection_max_train", st.projection_max_train},
              {"interpolation_max_val", st.interpolation_max_val},
              {"ridge_max_train", st.ridge_max_train},
              {"ridge_max_val", st.ridge_max_val},
              {"end_to_end_max_val", st.end_to_end_max_val},
              {"uncovered_val", st.uncovered_val},
              {"ridge_target_met", st.ridge_target_met}};
}

StageResiduals stages_from_json(const json& j) {
  StageResiduals st;
  st.projection_max_train = j.at("projection_max_train").get<double>();
  st.interpolation_max_val = j.at("interpolation_max_val").get<double>();
  st.ridge_max_train = j.at("ridge_max_train").get<double>();
  st.ridge_max_val = j.at("ridge_max_val").get<double>();
  st.end_to_end_max_val = j.at("end_to_end_max_val").get<double>();
  st.uncovered_val = j.at("uncovered_val").get<int>();
  st.ridge_target_met = j.at("ridge_target_met").get<bool>();
  return st;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::io, "malformed JSON");
  return j;
}

template <typename Fn>
auto guard_json(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "cannot read " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
}

void save_samples(const SampleSet& samples, const std::string& path) {
  json j;
  j["dim"] = samples.grid().dim;
  j["m"] = samples.grid().m;
  j["n"] = samples.n();
  json pts = json::array();
  for (const auto& x : samples.points) pts.push_back(point_to_json(x));
  j["points"] = std::move(pts);
  write_text_file(path, j.dump() + "\n");
}

SampleSet load_samples(const std::string& path) {
  return guard_json("samples", [&] {
    const json j = parse_text(read_text_file(path));
    Grid grid;
    grid.dim = j.at("dim").get<int>();
    grid.m = j.at("m").get<int>();
    grid.validate();
    const int n = j.at("n").get<int>();
    if (n < 1) throw Error(ErrorCode::io, "component count must be positive");
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty())
      throw Error(ErrorCode::io, "sample file holds no points");
    std::vector<ProductPoint> points;
    points.reserve(pts.size());
    for (const auto& p : pts) points.push_back(point_from_json(p, grid, n));
    return SampleSet(std::move(points), path);
  });
}

std::string model_to_json(const FunctionalApproximant& g) {
  json j;
  j["version"] = 1;
  j["grid"] = grid_to_json(g.grid());
  j["n"] = g.n();
  json terms = json::array();
  for (int t = 0; t < g.measurements().size(); ++t) {
    json term;
    term["kind"] = zeta_kind_name(g.zetas()[static_cast<std::size_t>(t)].kind);
    term["amplitude"] = g.zetas()[static_cast<std::size_t>(t)].amplitude;
    term["freq"] = vector_to_json(g.freqs().col(t));
    term["representers"] = point_to_json(g.measurements().representers[static_cast<std::size_t>(t)]);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  const CoverageData& cov = g.coverage();
  j["coverage"] = json{{"basis", columns_to_json(cov.basis)},
                       {"center_coords", rows_to_json(cov.center_coords)},
                       {"center_values", vector_to_json(cov.center_values)},
                       {"radius", cov.radius}};
  const ApproximantInfo& info = g.info();
  json params(info.functional_params);
  j["metadata"] = json{{"epsilon", info.epsilon},
                       {"delta", info.delta},
                       {"net_size", info.net_size},
                       {"dim", info.dim},
                       {"terms", info.terms},
                       {"seed", info.seed},
                       {"functional", info.functional},
                       {"functional_params", std::move(params)},
                       {"stage_residuals", stages_to_json(info.stages)}};
  return j.dump() + "\n";
}

FunctionalApproximant model_from_json(const std::string& text) {
  return guard_json("model", [&] {
    const json j = parse_text(text);
    if (j.at("version").get<int>() != 1)
      throw Error(ErrorCode::io, "unsupported model version");
    const Grid grid = grid_from_json(j.at("grid"));
    const int n = j.at("n").get<int>();
    const json& terms = j.at("terms");
    if (!terms.is_array() || terms.empty())
      throw Error(ErrorCode::io, "model holds no terms");

    MeasurementSet ms;
    std::vector<ZetaSpec> zetas;
    const json& meta = j.at("metadata");
    const int d = meta.at("dim").get<int>();
    Eigen::MatrixXd freqs(d, static_cast<Eigen::Index>(terms.size()));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const json& term = terms[t];
      zetas.push_back(ZetaSpec{zeta_kind_from_name(term.at("kind").get<std::string>()),
                               term.at("amplitude").get<double>()});
      freqs.col(static_cast<Eigen::Index>(t)) = vector_from_json(term.at("freq"), d);
      ms.representers.push_back(point_from_json(term.at("representers"), grid, n));
    }

    const json& cov = j.at("coverage");
    CoverageData coverage;
    coverage.basis = columns_from_json(cov.at("basis"), grid.nodes() * n);
    coverage.center_coords = rows_from_json(cov.at("center_coords"), d);
    coverage.center_values = vector_from_json(cov.at("center_values"),
                                              coverage.center_coords.rows());
    coverage.radius = cov.at("radius").get<double>();

    ApproximantInfo info;
    info.epsilon = meta.at("epsilon").get<double>();
    info.delta = meta.at("delta").get<double>();
    info.net_size = meta.at("net_size").get<int>();
    info.dim = d;
    info.terms = meta.at("terms").get<int>();
    info.seed = meta.at("seed").get<std::uint64_t>();
    info.functional = meta.at("functional").get<std::string>();
    for (const auto& [key, value] : meta.at("functional_params").items())
      info.functional_params[key] = value.get<double>();
    info.stages = stages_from_json(meta.at("stage_residuals"));

    return FunctionalApproximant(grid, n, std::move(ms), std::move(zetas), std::move(freqs),
                                 std::move(coverage), std::move(info));
  });
}

void save_model(const FunctionalApproximant& g, const std::string& path) {
  write_text_file(path, model_to_json(g));
}

FunctionalApproximant load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

std::string operator_to_json(const FiniteRankOperator& g) {
  json j;
  j["version"] = 1;
  j["grid"] = grid_to_json(g.in_grid());
  j["n"] = g.n();
  j["range_grid"] = grid_to_json(g.range_grid());
  json terms = json::array();
  json atoms = json::array();
  for (std::size_t t = 0; t < g.atoms().size(); ++t) {
    json term;
    term["kind"] = zeta_kind_name(g.zetas()[t].kind);
    term["amplitude"] = g.zetas()[t].amplitude;
    term["representers"] = point_to_json(g.measurements().representers[t]);
    terms.push_back(std::move(term));
    atoms.push_back(vector_to_json(g.atoms()[t].values()));
  }
  j["terms"] = std::move(terms);
  j["atoms"] = std::move(atoms);
  const OperatorInfo& info = g.info();
  json coords = json::array();
  for (const auto& c : info.coordinates)
    coords.push_back(json{{"epsilon", c.epsilon},
                          {"delta", c.delta},
                          {"net_size", c.net_size},
                          {"dim", c.dim},
                          {"terms", c.terms},
                          {"stage_residuals", stages_to_json(c.stages)}});
  j["metadata"] = json{{"epsilon", info.epsilon},
                       {"range_net_size", info.range_net_size},
                       {"range_dim", info.range_dim},
                       {"atoms", info.atoms},
                       {"coordinate_budget", info.coordinate_budget},
                       {"range_pou_max_train", info.range_pou_max_train},
                       {"range_pou_max_val", info.range_pou_max_val},
                       {"end_to_end_max_val", info.end_to_end_max_val},
                       {"sum_coordinate_max", info.sum_coordinate_max},
                       {"uncovered_val", info.uncovered_val},
                       {"seed", info.seed},
                       {"coordinates", std::move(coords)}};
  return j.dump() + "\n";
}

FiniteRankOperator operator_from_json(const std::string& text) {
  return guard_json("operator", [&] {
    const json j = parse_text(text);
    if (j.at("version").get<int>() != 1)
      throw Error(ErrorCode::io, "unsupported operator version");
    const Grid grid = grid_from_json(j.at("grid"));
    const int n = j.at("n").get<int>();
    const Grid range_grid = grid_from_json(j.at("range_grid"));
    const json& terms = j.at("terms");
    const json& atom_arr = j.at("atoms");
    if (!terms.is_array() || terms.empty())
      throw Error(ErrorCode::io, "operator holds no terms");
    if (!atom_arr.is_array() || atom_arr.size() != terms.size())
      throw Error(ErrorCode::io, "atom count does not match the terms");

    MeasurementSet ms;
    std::vector<ZetaSpec> zetas;
    std::vector<GridFunction> atoms;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const json& term = terms[t];
      zetas.push_back(ZetaSpec{zeta_kind_from_name(term.at("kind").get<std::string>()),
                               term.at("amplitude").get<double>()});
      ms.representers.push_back(point_from_json(term.at("representers"), grid, n));
      atoms.emplace_back(range_grid, vector_from_json(atom_arr[t], range_grid.nodes()));
    }

    const json& meta = j.at("metadata");
    OperatorInfo info;
    info.epsilon = meta.at("epsilon").get<double>();
    info.range_net_size = meta.at("range_net_size").get<int>();
    info.range_dim = meta.at("range_dim").get<int>();
    info.atoms = meta.at("atoms").get<int>();
    info.coordinate_budget = meta.at("coordinate_budget").get<double>();
    info.range_pou_max_train = meta.at("range_pou_max_train").get<double>();
    info.range_pou_max_val = meta.at("range_pou_max_val").get<double>();
    info.end_to_end_max_val = meta.at("end_to_end_max_val").get<double>();
    info.sum_coordinate_max = meta.at("sum_coordinate_max").get<double>();
    info.uncovered_val = meta.at("uncovered_val").get<int>();
    info.seed = meta.at("seed").get<std::uint64_t>();
    for (const auto& c : meta.at("coordinates")) {
      CoordinateSummary cs;
      cs.epsilon = c.at("epsilon").get<double>();
      cs.delta = c.at("delta").get<double>();
      cs.net_size = c.at("net_size").get<int>();
      cs.dim = c.at("dim").get<int>();
      cs.terms = c.at("terms").get<int>();
      cs.stages = stages_from_json(c.at("stage_residuals"));
      info.coordinates.push_back(cs);
    }

    return FiniteRankOperator(grid, n, range_grid, std::move(atoms), std::move(zetas),
                              std::move(ms), std::move(info));
  });
}

void save_operator(const FiniteRankOperator& g, const std::string& path) {
  write_text_file(path, operator_to_json(g));
}

FiniteRankOperator load_operator(const std::string& path) {
  return operator_from_json(read_text_file(path));
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_report_csv(const ErrorReport& report, const std::string& path) {
  std::ostringstream out;
  out << "point_index,f_value,g_value,abs_error,covered\n";
  for (const auto& row : report.rows)
    out << row.index << ',' << format_double(row.f_value) << ',' << format_double(row.g_value)
        << ',' << format_double(row.abs_error) << ',' << (row.covered ? 1 : 0) << '\n';
  write_text_file(path, out.str());
}

void save_operator_report_csv(const OperatorReport& report, const std::string& path) {
  std::ostringstream out;
  out << "point_index,f_norm,g_norm,y_error,covered\n";
  for (const auto& row : report.rows)
    out << row.index << ',' << format_double(row.f_norm) << ',' << format_double(row.g_norm)
        << ',' << format_double(row.y_error) << ',' << (row.covered ? 1 : 0) << '\n';
  write_text_file(path, out.str());
}

}  // namespace supnet
