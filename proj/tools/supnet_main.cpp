#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "supnet/demos.hpp"
#include "supnet/model_io.hpp"

using namespace supnet;
using nlohmann::json;

namespace {

json stages_json(const StageResiduals& st) {
  return json{{"projection_max_train", st.projection_max_train},
              {"interpolation_max_val", st.interpolation_max_val},
              {"ridge_max_train", st.ridge_max_train},
              {"ridge_max_val", st.ridge_max_val},
              {"end_to_end_max_val", st.end_to_end_max_val},
              {"uncovered_val", st.uncovered_val},
              {"ridge_target_met", st.ridge_target_met}};
}

json operator_stages_json(const OperatorInfo& info) {
  return json{{"range_pou_max_train", info.range_pou_max_train},
              {"range_pou_max_val", info.range_pou_max_val},
              {"sum_coordinate_max", info.sum_coordinate_max},
              {"end_to_end_max_val", info.end_to_end_max_val},
              {"uncovered_val", info.uncovered_val},
              {"coordinate_budget", info.coordinate_budget}};
}

Functional functional_from_name(const std::string& name, const Grid& grid,
                                const std::map<std::string, double>& params) {
  if (name == "product" || name == "squares" || name == "clipped")
    return integral_functional(phi_kind_from_name(name));
  if (name == "tomography") {
    auto bins = params.find("bins");
    auto which = params.find("which");
    if (bins == params.end() || which == params.end())
      throw Error(ErrorCode::usage, "tomography needs 'bins' and 'which' parameters");
    Tomography tomo{grid, static_cast<int>(bins->second)};
    return tomography_functional(tomo, static_cast<int>(which->second));
  }
  throw Error(ErrorCode::usage, "unknown functional: " + name);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

struct FitArgs {
  std::string family = "fourier_band";
  std::string functional = "product";
  std::string out;
  std::string samples_out;
  double epsilon = 0.1;
  std::uint64_t seed = 7;
  int n_train = 400;
  int n_val = 200;
  int n_test = 200;
  int m = 0;
  int n = 0;
  bool strict = false;
};

int run_fit(const FitArgs& a) {
  FamilySpec spec = FamilySpec::defaults(family_kind_from_name(a.family));
  if (a.m > 0) spec.m = a.m;
  if (a.n > 0) spec.n = a.n;
  const FamilySets sets = generate_family(spec, a.n_train, a.n_val, a.n_test, a.seed);

  std::map<std::string, double> params;
  if (a.functional == "tomography") params = {{"bins", 4.0}, {"which", 1.0}};
  const Functional f = functional_from_name(a.functional, spec.grid(), params);

  BuildConfig cfg;
  FunctionalApproximant g = build_approximant(f, sets.train, sets.val, a.epsilon, cfg, a.seed);
  g.info().functional = a.functional;
  g.info().functional_params = params;
  save_model(g, a.out);
  if (!a.samples_out.empty()) save_samples(sets.test, a.samples_out);

  const ApproximantInfo& info = g.info();
  print_json(json{{"out", a.out},
                  {"epsilon", info.epsilon},
                  {"delta", info.delta},
                  {"net_size", info.net_size},
                  {"dim", info.dim},
                  {"terms", info.terms},
                  {"stage_residuals", stages_json(info.stages)}});
  if (a.strict &&
      (info.stages.end_to_end_max_val >= a.epsilon || !info.stages.ridge_target_met))
    return 3;
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string test;
  std::string report;
};

int run_eval(const EvalArgs& a) {
  const FunctionalApproximant g = load_model(a.model);
  const SampleSet samples = load_samples(a.test);
  if (!(samples.grid() == g.grid()) || samples.n() != g.n())
    throw Error(ErrorCode::usage, "test samples do not match the model space");
  if (g.info().functional.empty())
    throw Error(ErrorCode::usage, "model does not name its reference functional");
  const Functional f =
      functional_from_name(g.info().functional, g.grid(), g.info().functional_params);
  const ErrorReport rep = sup_error(f, g, samples);
  save_report_csv(rep, a.report);
  print_json(json{{"report", a.report},
                  {"max_abs_error", rep.max_abs_error},
                  {"mean_abs_error", rep.mean_abs_error},
                  {"uncovered", rep.uncovered},
                  {"total", rep.total}});
  return 0;
}

struct CoverArgs {
  std::string samples;
  double radius = 0.0;
};

int run_cover(const CoverArgs& a) {
  const SampleSet samples = load_samples(a.samples);
  const Net net = greedy_net(samples, a.radius);
  const double max_residual = net_coverage_distances(samples, net).maxCoeff();
  print_json(json{{"net_size", net.center_indices.size()},
                  {"radius", a.radius},
                  {"max_residual", max_residual}});
  return 0;
}

struct OpFitArgs {
  std::string family = "image_phantom";
  std::string op = "blur";
  std::string out;
  std::string report;
  double epsilon = 0.15;
  double sigma = 1.5;
  std::uint64_t seed = 7;
  int n_train = 600;
  int n_val = 150;
  int n_test = 150;
  bool strict = false;
};

int run_opfit(const OpFitArgs& a) {
  if (a.op != "blur") throw Error(ErrorCode::usage, "unknown operator: " + a.op);
  FamilySpec spec = FamilySpec::defaults(family_kind_from_name(a.family));
  const FamilySets sets = generate_family(spec, a.n_train, a.n_val, a.n_test, a.seed);
  const MapHandle h = blur_operator(a.sigma);
  OperatorConfig cfg;
  FiniteRankOperator op = build_operator(h, sets.train, sets.val, a.epsilon, cfg, a.seed);
  save_operator(op, a.out);
  const OperatorReport rep = operator_error(h, op, sets.test);
  if (!a.report.empty()) save_operator_report_csv(rep, a.report);

  const OperatorInfo& info = op.info();
  print_json(json{{"out", a.out},
                  {"epsilon", info.epsilon},
                  {"range_net_size", info.range_net_size},
                  {"range_dim", info.range_dim},
                  {"atoms", info.atoms},
                  {"stage_residuals", operator_stages_json(info)},
                  {"test_max_y_error", rep.max_y_error},
                  {"test_uncovered", rep.uncovered},
                  {"test_total", rep.total}});
  if (a.strict) {
    bool ok = info.end_to_end_max_val < a.epsilon;
    for (const auto& c : info.coordinates)
      if (!c.stages.ridge_target_met) ok = false;
    if (!ok) return 3;
  }
  return 0;
}

struct DemoArgs {
  std::string which;
  std::string outdir;
  double epsilon = 0.0;
  std::uint64_t seed = 7;
};

int run_demo(const DemoArgs& a) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.outdir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + a.outdir + ": " + ec.message());
  auto path = [&](const char* name) { return (fs::path(a.outdir) / name).string(); };

  if (a.which == "image") {
    OpFitArgs op;
    op.epsilon = a.epsilon > 0.0 ? a.epsilon : 0.15;
    op.seed = a.seed;
    op.out = path("operator.json");
    const FamilySpec spec = FamilySpec::defaults(FamilyKind::image_phantom);
    const FamilySets sets = generate_family(spec, op.n_train, op.n_val, op.n_test, op.seed);
    save_samples(sets.train, path("train.json"));
    save_samples(sets.val, path("val.json"));
    save_samples(sets.test, path("test.json"));
    const MapHandle h = blur_operator(op.sigma);
    OperatorConfig cfg;
    FiniteRankOperator g = build_operator(h, sets.train, sets.val, op.epsilon, cfg, op.seed);
    save_operator(g, op.out);
    const OperatorReport rep = operator_error(h, g, sets.test);
    save_operator_report_csv(rep, path("report.csv"));
    const OperatorInfo& info = g.info();
    const json summary{{"stage_residuals", operator_stages_json(info)},
                       {"end_to_end_max_error", rep.max_y_error},
                       {"uncovered_count", rep.uncovered},
                       {"r", info.atoms},
                       {"d", info.range_dim},
                       {"net_size", info.range_net_size}};
    write_text_file(path("summary.json"), summary.dump(2) + "\n");
    print_json(summary);
    return 0;
  }

  FamilySpec spec;
  std::string functional;
  std::map<std::string, double> params;
  double epsilon = a.epsilon;
  if (a.which == "integral") {
    spec = FamilySpec::defaults(FamilyKind::fourier_band);
    functional = "product";
    if (epsilon <= 0.0) epsilon = 0.1;
  } else if (a.which == "tomo") {
    spec = FamilySpec::defaults(FamilyKind::image_phantom);
    functional = "tomography";
    params = {{"bins", 4.0}, {"which", 1.0}};
    if (epsilon <= 0.0) epsilon = 0.05;
  } else {
    throw Error(ErrorCode::usage, "unknown demo: " + a.which);
  }

  const FamilySets sets = generate_family(spec, 400, 200, 200, a.seed);
  save_samples(sets.train, path("train.json"));
  save_samples(sets.val, path("val.json"));
  save_samples(sets.test, path("test.json"));
  const Functional f = functional_from_name(functional, spec.grid(), params);
  BuildConfig cfg;
  FunctionalApproximant g = build_approximant(f, sets.train, sets.val, epsilon, cfg, a.seed);
  g.info().functional = functional;
  g.info().functional_params = params;
  save_model(g, path("model.json"));
  const ErrorReport rep = sup_error(f, g, sets.test);
  save_report_csv(rep, path("report.csv"));
  const ApproximantInfo& info = g.info();
  const json summary{{"stage_residuals", stages_json(info.stages)},
                     {"end_to_end_max_error", rep.max_abs_error},
                     {"uncovered_count", rep.uncovered},
                     {"r", info.terms},
                     {"d", info.dim},
                     {"net_size", info.net_size}};
  write_text_file(path("summary.json"), summary.dump(2) + "\n");
  print_json(summary);
  return 0;
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::usage: return 2;
    case ErrorCode::io: return 4;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sup-norm approximants of continuous functionals from samples"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "build a functional approximant");
  fit_cmd->add_option("--family", fit_args.family, "sample family")
      ->check(CLI::IsMember({"fourier_band", "bump_mixture", "image_phantom"}));
  fit_cmd->add_option("--functional", fit_args.functional, "reference functional")
      ->check(CLI::IsMember({"product", "squares", "clipped", "tomography"}));
  fit_cmd->add_option("--epsilon", fit_args.epsilon, "target sup-norm accuracy")->required();
  fit_cmd->add_option("--seed", fit_args.seed, "random seed");
  fit_cmd->add_option("--out", fit_args.out, "model output path")->required();
  fit_cmd->add_option("--samples-out", fit_args.samples_out, "also write the test samples here");
  fit_cmd->add_option("--n-train", fit_args.n_train, "training sample count");
  fit_cmd->add_option("--n-val", fit_args.n_val, "validation sample count");
  fit_cmd->add_option("--n-test", fit_args.n_test, "test sample count");
  fit_cmd->add_option("--m", fit_args.m, "grid points per axis (0 = family default)");
  fit_cmd->add_option("--n", fit_args.n, "components per point (0 = family default)");
  fit_cmd->add_flag("--strict", fit_args.strict, "fail when the accuracy budget is missed");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a model against fresh samples");
  eval_cmd->add_option("--model", eval_args.model, "model JSON path")->required();
  eval_cmd->add_option("--test", eval_args.test, "test sample JSON path")->required();
  eval_cmd->add_option("--report", eval_args.report, "CSV report output path")->required();

  CoverArgs cover_args;
  CLI::App* cover_cmd = app.add_subcommand("cover", "greedy net summary for a sample set");
  cover_cmd->add_option("--samples", cover_args.samples, "sample JSON path")->required();
  cover_cmd->add_option("--radius", cover_args.radius, "net radius")->required();

  OpFitArgs op_args;
  CLI::App* op_cmd = app.add_subcommand("op-fit", "build a finite-rank operator approximant");
  op_cmd->add_option("--family", op_args.family, "sample family")
      ->check(CLI::IsMember({"fourier_band", "bump_mixture", "image_phantom"}));
  op_cmd->add_option("--operator", op_args.op, "operator to approximate")
      ->check(CLI::IsMember({"blur"}));
  op_cmd->add_option("--epsilon", op_args.epsilon, "target range-norm accuracy")->required();
  op_cmd->add_option("--sigma", op_args.sigma, "blur width");
  op_cmd->add_option("--seed", op_args.seed, "random seed");
  op_cmd->add_option("--out", op_args.out, "operator output path")->required();
  op_cmd->add_option("--report", op_args.report, "CSV report output path");
  op_cmd->add_option("--n-train", op_args.n_train, "training sample count");
  op_cmd->add_option("--n-val", op_args.n_val, "validation sample count");
  op_cmd->add_option("--n-test", op_args.n_test, "test sample count");
  op_cmd->add_flag("--strict", op_args.strict, "fail when the accuracy budget is missed");

  DemoArgs demo_args;
  CLI::App* demo_cmd = app.add_subcommand("demo", "end-to-end worked example");
  demo_cmd->add_option("which", demo_args.which, "integral, tomo, or image")
      ->required()
      ->check(CLI::IsMember({"integral", "tomo", "image"}));
  demo_cmd->add_option("--epsilon", demo_args.epsilon, "target accuracy (0 = demo default)");
  demo_cmd->add_option("--seed", demo_args.seed, "random seed");
  demo_cmd->add_option("--outdir", demo_args.outdir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fit_cmd)) return run_fit(fit_args);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_args);
    if (app.got_subcommand(cover_cmd)) return run_cover(cover_args);
    if (app.got_subcommand(op_cmd)) return run_opfit(op_args);
    if (app.got_subcommand(demo_cmd)) return run_demo(demo_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
