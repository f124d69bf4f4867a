#include "maxent/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "maxent/errors.hpp"
#include "maxent/expansion.hpp"
#include "maxent/json_io.hpp"
#include "maxent/oracle.hpp"
#include "maxent/problem.hpp"

namespace maxent {

namespace {

struct InputOptions {
  std::string path;
  bool csv = false;
  bool target = false;
  bool drop_dependent = false;
  double tolerance = kDefaultSingularTolerance;
};

struct RunConfig {
  InputOptions input;
  std::string output_path;
  int order = kDefaultOrder;
  std::string basis = "moment";
  std::vector<double> rho;
  bool raw = false;
  int output_index = 1;
  std::vector<int> index;
  std::vector<double> radii{0.05, 0.1, 0.2};
  int samples = 20;
  std::uint64_t seed = 7;
  bool timing = false;
};

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "Problem JSON or sample CSV")->required();
  cmd->add_flag("--csv", in.csv, "Read the input as 'symbol,v1,...,vk[,s]' records (implied by a .csv suffix)");
  cmd->add_flag("--target", in.target, "With CSV input, the last column is the target s");
  cmd->add_flag("--drop-dependent", in.drop_dependent, "Drop linearly dependent constraint rows instead of failing");
  cmd->add_option("--tol", in.tolerance, "Singularity tolerance for normalization")->check(CLI::PositiveNumber);
}

void add_expansion(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--order,-d", cfg.order, "Expansion order")->check(CLI::Range(1, 64));
  cmd->add_option("--basis", cfg.basis, "moment or cumulant")->check(CLI::IsMember({"moment", "cumulant"}));
}

Problem load_input(const InputOptions& in) {
  LoadOptions load{in.drop_dependent, 1e-9};
  const bool csv = in.csv || (in.path.size() >= 4 && in.path.substr(in.path.size() - 4) == ".csv");
  if (csv) return load_samples_file(in.path, SampleOptions{in.target, load});
  return load_problem_file(in.path, load);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<double> to_normalized(const std::vector<double>& rho, bool raw, const AffineTransform* transform, int k) {
  if (static_cast<int>(rho.size()) != k) {
    throw DataError("--rho has " + std::to_string(rho.size()) + " entries, expected k=" + std::to_string(k));
  }
  if (!raw) return rho;
  if (!transform) throw DataError("--raw needs a table with a stored transform");
  return map_constraints(*transform, rho);
}

Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json cmd_normalize(const RunConfig& cfg) { return to_json(normalize(load_input(cfg.input), cfg.input.tolerance)); }

Json cmd_expand(const RunConfig& cfg) {
  const Normalization n = normalize(load_input(cfg.input), cfg.input.tolerance);
  return to_json(expand(n.problem, parse_basis(cfg.basis), cfg.order), &n.transform);
}

Json cmd_eval(const RunConfig& cfg) {
  const Json doc = parse_json(read_text(cfg.input.path));
  StoredTable stored;
  if (doc.is_object() && doc.contains("outputs")) {
    stored = table_from_json(doc);
  } else {
    const Normalization n = normalize(load_input(cfg.input), cfg.input.tolerance);
    stored.table = expand(n.problem, parse_basis(cfg.basis), cfg.order);
    stored.transform = n.transform;
  }
  const auto rho = to_normalized(cfg.rho, cfg.raw, stored.transform ? &*stored.transform : nullptr, stored.table.variables);
  Json values = Json::array();
  for (const auto& [index, value] : evaluate(stored.table, rho)) values.push_back(Json{{"output", index}, {"value", value}});
  return Json{{"rho", vector_json(rho)}, {"values", values}};
}

Json cmd_solve(const RunConfig& cfg) {
  const Normalization n = normalize(load_input(cfg.input), cfg.input.tolerance);
  const auto rho = to_normalized(cfg.rho, cfg.raw, &n.transform, n.problem.k());
  Json doc = to_json(solve_exact(n.problem, rho));
  doc["rho"] = vector_json(rho);
  return doc;
}

Json cmd_trees(const RunConfig& cfg) {
  const Normalization n = normalize(load_input(cfg.input), cfg.input.tolerance);
  if (static_cast<int>(cfg.index.size()) != n.problem.k()) {
    throw DataError("--index has " + std::to_string(cfg.index.size()) + " entries, expected k=" + std::to_string(n.problem.k()));
  }
  for (int a : cfg.index)
    if (a < 0) throw DataError("--index entries must be nonnegative");
  return to_json(coefficient_report(n.problem, parse_basis(cfg.basis), cfg.output_index, MultiIndex(std::span<const int>(cfg.index))));
}

Json cmd_verify(const RunConfig& cfg) {
  const Normalization n = normalize(load_input(cfg.input), cfg.input.tolerance);
  const CoefficientTable table = expand(n.problem, parse_basis(cfg.basis), cfg.order);
  VerifyOptions opts;
  opts.radii = cfg.radii;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  return to_json(verify_series(n.problem, table, opts), cfg.timing);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree expansions of maximum-entropy exponential parameters", "maxent"};
  app.require_subcommand(1);
  app.fallthrough();  // lets -o follow the subcommand
  RunConfig cfg;
  app.add_option("--output,-o", cfg.output_path, "Write JSON here instead of stdout");

  auto* normalize_cmd = app.add_subcommand("normalize", "Emit the normalized problem and its affine transform");
  add_input(normalize_cmd, cfg.input);

  auto* expand_cmd = app.add_subcommand("expand", "Emit the coefficient table for lambda (and sigma when s is present)");
  add_input(expand_cmd, cfg.input);
  add_expansion(expand_cmd, cfg);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a table (or a freshly expanded problem) at rho");
  add_input(eval_cmd, cfg.input);
  add_expansion(eval_cmd, cfg);
  eval_cmd->add_option("--rho", cfg.rho, "Comma-separated constraint values")->delimiter(',')->allow_extra_args(false)->required();
  eval_cmd->add_flag("--raw", cfg.raw, "rho is in raw coordinates; map it through the stored transform");

  auto* solve_cmd = app.add_subcommand("solve", "Solve the KL minimization directly at rho");
  add_input(solve_cmd, cfg.input);
  solve_cmd->add_option("--rho", cfg.rho, "Comma-separated constraint values")->delimiter(',')->allow_extra_args(false)->required();
  solve_cmd->add_flag("--raw", cfg.raw, "rho is in raw coordinates");

  auto* trees_cmd = app.add_subcommand("trees", "List the trees feeding one coefficient");
  add_input(trees_cmd, cfg.input);
  trees_cmd->add_option("--basis", cfg.basis, "moment or cumulant")->check(CLI::IsMember({"moment", "cumulant"}));
  trees_cmd->add_option("--output", cfg.output_index, "Output index 0..k+1")->required();
  trees_cmd->add_option("--index", cfg.index, "Comma-separated exponents a_1..a_k")->delimiter(',')->allow_extra_args(false)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Compare the series against the exact solver");
  add_input(verify_cmd, cfg.input);
  add_expansion(verify_cmd, cfg);
  verify_cmd->add_option("--radii", cfg.radii, "Comma-separated sphere radii")->delimiter(',')->allow_extra_args(false)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--samples", cfg.samples, "Samples per radius")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", cfg.seed, "Random seed");
  verify_cmd->add_flag("--timing", cfg.timing, "Include wall time (makes output run-dependent)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Json result;
    if (*normalize_cmd) result = cmd_normalize(cfg);
    else if (*expand_cmd) result = cmd_expand(cfg);
    else if (*eval_cmd) result = cmd_eval(cfg);
    else if (*solve_cmd) result = cmd_solve(cfg);
    else if (*trees_cmd) result = cmd_trees(cfg);
    else result = cmd_verify(cfg);

    const std::string text = dump_json(result);
    if (cfg.output_path.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.output_path);
      if (!f) throw DataError("cannot write '" + cfg.output_path + "'");
      f << text;
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace maxent
