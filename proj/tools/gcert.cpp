#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gcert/builtins.hpp"
#include "gcert/errors.hpp"
#include "gcert/fractional.hpp"
#include "gcert/io.hpp"
#include "gcert/kkt.hpp"
#include "gcert/oracle.hpp"
#include "gcert/report.hpp"

using namespace gcert;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string file;
  std::vector<double> point;
  std::vector<double> lambda;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> rounds;
  bool no_oracle = false;
  std::string report;
  bool json_out = false;
  std::optional<double> tol_psd;
  std::optional<double> tol_feas;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_file = true) {
  if (with_file) {
    cmd->add_option("file", a.file, "problem file (or built-in name e1.opt .. e4.opt)")
        ->required();
  }
  cmd->add_option("--point", a.point, "candidate point x1,x2,...")->delimiter(',');
  cmd->add_option("--lambda", a.lambda, "fixed multipliers l1,...,lm")->delimiter(',');
  cmd->add_option("--grid", a.grid, "oracle grid points per axis");
  cmd->add_option("--rounds", a.rounds, "oracle refinement rounds");
  cmd->add_flag("--no-oracle", a.no_oracle, "skip the brute-force cross-check");
  cmd->add_option("--report", a.report, "write a JSON report to this path");
  cmd->add_flag("--json", a.json_out, "print the JSON report instead of text");
  cmd->add_option("--tol-psd", a.tol_psd, "relative definiteness tolerance");
  cmd->add_option("--tol-feas", a.tol_feas, "absolute constraint feasibility tolerance");
}

PipelineOptions pipeline_options(const CommonArgs& a) {
  PipelineOptions o;
  if (a.tol_psd) o.tol.psd_relative = *a.tol_psd;
  if (a.tol_feas) o.tol.feasibility = *a.tol_feas;
  if (!a.lambda.empty()) o.lambda = a.lambda;
  o.run_oracle = !a.no_oracle;
  o.grid = a.grid;
  o.refinement_rounds = a.rounds;
  return o;
}

void emit(const CommonArgs& a, const json& doc, const std::string& text) {
  if (a.json_out) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw Error("cannot write report file " + a.report);
    out << doc.dump(2) << "\n";
  }
}

Vector require_point(const CommonArgs& a, const ProblemInstance& p) {
  if (a.point.empty()) throw ContractError("--point is required for this command");
  if (a.point.size() != p.dim()) throw DimensionMismatch("--point", p.dim(), a.point.size());
  return a.point;
}

std::vector<Vector> candidates_for(const CommonArgs& a, const ParsedProblem& parsed) {
  if (!a.point.empty()) return {require_point(a, parsed.instance)};
  std::vector<Vector> out;
  if (!parsed.candidates.empty()) {
    for (const auto& c : parsed.candidates) out.push_back(c.x);
  } else {
    for (const auto& c : candidate_scan(parsed.instance, default_scan_points(parsed.instance.box())))
      out.push_back(c.x);
  }
  return out;
}

/// 0 when some report is definitive, 2 when every report is LocalOnly.
int exit_code(const std::vector<CertificationReport>& reports) {
  for (const auto& r : reports) {
    if (r.classification != Classification::LocalOnly) return 0;
  }
  return reports.empty() ? 0 : 2;
}

std::vector<CertificationReport> certify_all(const ParsedProblem& parsed,
                                             const std::vector<Vector>& points,
                                             const PipelineOptions& opts) {
  const auto& p = parsed.instance;
  std::optional<OracleResult> oracle;
  if (opts.run_oracle && points.size() > 1 && p.dim() <= kOracleMaxDim) {
    oracle = global_search(p, opts.grid.value_or(default_points_per_axis(p.box())),
                           opts.refinement_rounds.value_or(default_refinement_rounds(p.box())));
  }
  std::vector<CertificationReport> reports;
  for (const auto& x : points) {
    reports.push_back(certify_candidate(p, x, opts, oracle ? &*oracle : nullptr));
  }
  return reports;
}

int run_certify(const CommonArgs& a) {
  const ParsedProblem parsed = load_problem(a.file);
  const auto reports = certify_all(parsed, candidates_for(a, parsed), pipeline_options(a));
  json doc = json::array();
  std::string text;
  if (!parsed.title.empty()) text += parsed.title + "\n";
  for (const auto& r : reports) {
    doc.push_back(to_json(r));
    text += to_text(r);
  }
  emit(a, reports.size() == 1 ? doc.front() : doc, text);
  return exit_code(reports);
}

int run_check_local(const CommonArgs& a) {
  const ParsedProblem parsed = load_problem(a.file);
  const auto& p = parsed.instance;
  const Vector x = require_point(a, p);
  const PipelineOptions opts = pipeline_options(a);
  json doc;
  std::string text = "candidate " + fmt(x) + "\n";
  const auto feas = feasibility(p, x, opts.tol);
  doc["feasible"] = feas.feasible;
  doc["constraint_values"] = feas.constraint_values;
  if (!feas.feasible) {
    text += "  infeasible (violation " + fmt(feas.worst_violation) + ")\n";
    emit(a, doc, text);
    return 0;
  }
  std::optional<MultiplierVector> lam;
  if (opts.lambda) {
    lam = MultiplierVector(*opts.lambda, opts.tol.slackness);
  } else {
    const auto region = solve_multiplier_region(p, x, opts.tol);
    doc["multiplier_region"] = to_json(region);
    text += to_text(region);
    if (region.shape != RegionShape::Empty) {
      lam = MultiplierVector(region.box_free_multiplier ? *region.box_free_multiplier
                                                        : region.vertices.front(),
                             opts.tol.slackness);
    }
  }
  if (lam) {
    const auto v = necessary_condition(p, x, *lam, opts.tol);
    const auto c = chi(p, x, *lam, opts.tol);
    const double slack = slackness_violation(p, x, *lam);
    doc["lambda"] = lam->lambdas;
    doc["necessary"] = to_json(v);
    doc["chi"] = c.values;
    doc["slackness_violation"] = slack;
    text += "at lambda " + fmt(lam->lambdas) + ":\n  chi " + fmt(c.values) + "\n";
    for (const auto& cc : v.per_coordinate) {
      text += "  x" + std::to_string(cc.index + 1) + " " + to_string(cc.provenance) + " lhs " +
              fmt(cc.lhs) + (cc.informational ? " (discrete, informational)" : "") + "\n";
    }
    text += "  complementary slackness violation " + fmt(slack) + "\n";
    text += std::string("  local necessary condition: ") + (v.holds ? "holds" : "fails") + "\n";
  } else {
    text += "  no multiplier satisfies the local necessary condition\n";
  }
  const auto licq = licq_check(p, x, opts.tol);
  doc["licq"] = json{{"holds", licq.holds}, {"rank", licq.rank}, {"columns", licq.columns}};
  text += std::string("  LICQ: ") + (licq.holds ? "holds" : "fails") + "\n";
  emit(a, doc, text);
  return 0;
}

int run_multipliers(const CommonArgs& a) {
  const ParsedProblem parsed = load_problem(a.file);
  const Vector x = require_point(a, parsed.instance);
  const auto region = solve_multiplier_region(parsed.instance, x, pipeline_options(a).tol);
  emit(a, to_json(region), "candidate " + fmt(x) + "\n" + to_text(region));
  return 0;
}

int run_oracle(const CommonArgs& a) {
  const ParsedProblem parsed = load_problem(a.file);
  const auto& p = parsed.instance;
  const std::size_t grid = a.grid.value_or(default_points_per_axis(p.box()));
  const std::size_t rounds = a.rounds.value_or(default_refinement_rounds(p.box()));
  const auto res = global_search(p, grid, rounds);
  const auto cands = candidate_scan(p, default_scan_points(p.box()));
  json doc = to_json(res);
  json cj = json::array();
  std::string text;
  if (res.found) {
    text += "best value " + fmt(res.best_value) + " at " + fmt(res.best_point.x) + "\n";
  } else {
    text += "no feasible point found\n";
  }
  text += "feasible grid points: " + std::to_string(res.feasible_count) + "\n";
  text += "candidate local minimizers / stationary grid points:\n";
  for (const auto& c : cands) {
    cj.push_back(c.x);
    text += "  " + fmt(c.x) + "  value " + fmt(p.objective_value(c.x)) + "\n";
  }
  doc["candidates"] = cj;
  emit(a, doc, text);
  return 0;
}

int run_reformulate(const CommonArgs& a) {
  const ParsedProblem parsed = load_problem(a.file);
  const auto& p = parsed.instance;
  const Vector x = require_point(a, p);
  const auto sur = reformulate(p, x, pipeline_options(a).tol);
  json doc;
  doc["anchor"] = sur.anchor;
  doc["e0"] = sur.e0;
  doc["c"] = sur.c_scalar;
  doc["xi"] = sur.xi.signs;
  doc["surrogate"] = problem_to_json(sur.base);
  std::string text = "surrogate quadratic program at " + fmt(x) + "\n  e0 = s(x) = " +
                     fmt(sur.e0) + ", c = den0(x) = " + fmt(sur.c_scalar) + "\n";
  const auto& qp = sur.base.quadratic();
  auto describe = [&](const std::string& name, const QuadraticFunction& q) {
    text += "  " + name + ": Q = ";
    for (const auto& row : q.A.to_rows()) text += fmt(row);
    text += ", q = " + fmt(q.a) + ", r = " + fmt(q.c) + "\n";
  };
  describe("objective", qp.objective);
  for (std::size_t j = 0; j < qp.constraints.size(); ++j) {
    describe("constraint " + std::to_string(j + 1), qp.constraints[j]);
  }
  if (!a.lambda.empty()) {
    const auto mu = transform_multipliers(p, x, MultiplierVector(a.lambda));
    doc["transformed_multipliers"] = mu.lambdas;
    text += "  transformed multipliers " + fmt(mu.lambdas) + "\n";
  }
  emit(a, doc, text);
  return 0;
}

int run_examples(const CommonArgs& a, const std::string& which, bool list,
                 const std::string& write_dir) {
  if (list) {
    for (const auto& e : builtin_examples()) std::cout << e.name << "  " << e.title << "\n";
    return 0;
  }
  if (!write_dir.empty()) {
    for (const auto& e : builtin_examples()) {
      const std::string path = write_dir + "/" + e.name;
      std::ofstream out(path);
      if (!out) throw Error("cannot write " + path);
      out << e.text;
      std::cout << "wrote " << path << "\n";
    }
    return 0;
  }
  std::vector<BuiltinExample> chosen;
  if (which == "all") {
    chosen = builtin_examples();
  } else if (auto b = find_builtin(which)) {
    chosen.push_back(*b);
  } else {
    throw ParseError("unknown example", which);
  }
  json doc = json::array();
  std::string text;
  std::vector<CertificationReport> all;
  for (const auto& e : chosen) {
    const ParsedProblem parsed = parse_problem_text(e.text);
    std::vector<Vector> points;
    for (const auto& c : parsed.candidates) points.push_back(c.x);
    const auto reports = certify_all(parsed, points, pipeline_options(a));
    text += "== " + e.name + ": " + e.title + "\n";
    json ej = json::array();
    for (const auto& r : reports) {
      text += to_text(r);
      ej.push_back(to_json(r));
      all.push_back(r);
    }
    doc.push_back(json{{"example", e.name}, {"reports", ej}});
  }
  emit(a, doc, text);
  return exit_code(all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcert: local and global optimality certificates for mixed-box programs"};
  app.require_subcommand(1);

  CommonArgs certify_args, local_args, mult_args, oracle_args, reform_args, ex_args;
  auto* certify = app.add_subcommand("certify", "classify candidate points");
  add_common(certify, certify_args);
  auto* local = app.add_subcommand("check-local", "evaluate the local necessary condition");
  add_common(local, local_args);
  auto* mult = app.add_subcommand("multipliers", "solve the multiplier region at a point");
  add_common(mult, mult_args);
  auto* oracle = app.add_subcommand("oracle", "brute-force global search and candidate scan");
  add_common(oracle, oracle_args);
  auto* reform = app.add_subcommand("reformulate", "quadratic surrogate of a fractional program");
  add_common(reform, reform_args);
  auto* examples = app.add_subcommand("examples", "list, write or run the built-in examples");
  add_common(examples, ex_args, false);
  std::string which = "all";
  bool list = false;
  std::string write_dir;
  examples->add_option("--run", which, "example to run (e1..e4 or all)");
  examples->add_flag("--list", list, "list the built-in examples");
  examples->add_option("--write", write_dir, "write the built-in files to a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*certify) return run_certify(certify_args);
    if (*local) return run_check_local(local_args);
    if (*mult) return run_multipliers(mult_args);
    if (*oracle) return run_oracle(oracle_args);
    if (*reform) return run_reformulate(reform_args);
    if (*examples) return run_examples(ex_args, which, list, write_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
