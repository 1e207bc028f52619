#include "pwalloc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwalloc/benefit_solver.hpp"
#include "pwalloc/harm_solver.hpp"
#include "pwalloc/oracle.hpp"
#include "pwalloc/serialization.hpp"

namespace pwalloc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Sense parse_sense(const std::string& s) {
  return s == "harm" ? Sense::harm : Sense::benefit;
}

SolveResult dispatch_solve(const AllocationProblem& problem) {
  const bool uniform = problem.priorities.uniform();
  if (problem.sense == Sense::harm) {
    return uniform ? solve_harm_homogeneous(problem)
                   : solve_harm_heterogeneous(problem);
  }
  return uniform ? solve_benefit_homogeneous(problem)
                 : solve_benefit_heterogeneous(problem);
}

// One positive real per line, exactly n lines.
std::vector<double> load_priorities(const std::string& path, std::size_t n) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot open priorities file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(file, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream is(line);
    double v = 0.0;
    if (!(is >> v)) throw UsageError("priorities file has a non-numeric line: " + line);
    std::string trailing;
    if (is >> trailing) throw UsageError("priorities file has extra tokens: " + line);
    values.push_back(v);
  }
  if (values.size() != n) {
    throw UsageError("priorities file must contain exactly " + std::to_string(n) +
                     " lines, found " + std::to_string(values.size()));
  }
  return values;
}

// Worst per-coordinate objective change the oracle grid can hide.
double discretization_bound(const AllocationProblem& problem, double step) {
  const auto units = static_cast<std::size_t>(std::llround(1.0 / step));
  double worst = 0.0;
  double prev = eval(problem.weighting, 0.0);
  for (std::size_t i = 1; i <= units; ++i) {
    const double cur = eval(problem.weighting, static_cast<double>(i) * step);
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  const double t_max = *std::max_element(problem.priorities.t.begin(),
                                         problem.priorities.t.end());
  return static_cast<double>(problem.n) * t_max * worst;
}

void write_csv_line(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) os << ',';
    os << cell;
    first = false;
  }
  os << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"probability-weighted allocation solvers"};
  app.require_subcommand(1);

  double alpha = 0.5, beta = 1.0, r = 0.0, r_min = 0.0, r_max = 0.0,
         r_step = 1.0, step = 0.02;
  std::size_t n = 1;
  int samples = 101;
  std::string sense_name = "harm", out_file, priorities_file, n_list;
  bool compact_json = false;

  auto* curve = app.add_subcommand("curve", "sample the weighting curve as CSV");
  curve->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  curve->add_option("--beta", beta, "elevation, > 0")->required();
  curve->add_option("--samples", samples, "number of sample points")
      ->required()
      ->check(CLI::Range(2, 10000000));
  curve->add_option("--out", out_file, "write CSV to this file instead of stdout");

  auto* solve = app.add_subcommand("solve", "solve one allocation problem");
  solve->add_option("--sense", sense_name, "harm or benefit")
      ->required()
      ->check(CLI::IsMember({"harm", "benefit"}));
  solve->add_option("--n", n, "population size")->required();
  solve->add_option("--r", r, "total expected harm/benefit")->required();
  solve->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  solve->add_option("--beta", beta, "elevation, > 0")->required();
  solve->add_option("--priorities", priorities_file,
                    "file with one positive priority per line, exactly n lines");
  solve->add_flag("--json", compact_json, "emit compact single-line JSON");

  auto* sweep = app.add_subcommand("sweep-k", "at-risk pool size across budgets, CSV");
  sweep->add_option("--n", n, "population size")->required();
  sweep->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  sweep->add_option("--beta", beta, "elevation, > 0")->required();
  sweep->add_option("--r-min", r_min, "first budget")->required();
  sweep->add_option("--r-max", r_max, "last budget")->required();
  sweep->add_option("--r-step", r_step, "budget increment")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* minr = app.add_subcommand(
      "min-r", "smallest budget that serves someone with certainty, CSV");
  minr->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  minr->add_option("--beta", beta, "elevation, > 0")->required();
  minr->add_option("--n-list", n_list, "comma-separated population sizes")->required();

  auto* threshold =
      app.add_subcommand("threshold", "uniformity threshold and landmarks, JSON");
  threshold->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  threshold->add_option("--beta", beta, "elevation, > 0")->required();

  auto* compare =
      app.add_subcommand("compare", "solver against the brute-force oracle, JSON");
  compare->add_option("--sense", sense_name, "harm or benefit")
      ->required()
      ->check(CLI::IsMember({"harm", "benefit"}));
  compare->add_option("--n", n, "population size")->required();
  compare->add_option("--r", r, "total expected harm/benefit")->required();
  compare->add_option("--alpha", alpha, "curvature, in (0,1)")->required();
  compare->add_option("--beta", beta, "elevation, > 0")->required();
  compare->add_option("--step", step, "oracle grid step")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return dynamic_cast<const CLI::Success*>(&e) != nullptr ? 0 : 1;
  }

  try {
    if (curve->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      std::ofstream file;
      if (!out_file.empty()) {
        file.open(out_file);
        if (!file) throw UsageError("cannot open output file: " + out_file);
      }
      std::ostream& os = out_file.empty() ? out : file;
      write_csv_line(os, {"p", "w"});
      for (int i = 0; i < samples; ++i) {
        const double p = static_cast<double>(i) / (samples - 1);
        write_csv_line(os, {format_sig9(p), format_sig9(eval(params, p))});
      }
    } else if (solve->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      AllocationProblem problem;
      if (priorities_file.empty()) {
        problem = make_problem(n, r, parse_sense(sense_name), params);
      } else {
        const std::vector<double> raw = load_priorities(priorities_file, n);
        problem = make_problem(n, r, parse_sense(sense_name), params, raw);
      }
      const nlohmann::json j = to_json(dispatch_solve(problem));
      out << (compact_json ? j.dump() : j.dump(2)) << '\n';
    } else if (sweep->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      std::vector<double> r_values;
      const auto count =
          static_cast<std::size_t>(std::floor((r_max - r_min) / r_step + 1e-9)) + 1;
      for (std::size_t i = 0; i < count; ++i) {
        r_values.push_back(r_min + static_cast<double>(i) * r_step);
      }
      const SweepResult result = sweep_k(params, n, r_values);
      write_csv_line(out, {"r", "k", "delta", "objective"});
      for (const auto& row : result.rows) {
        write_csv_line(out, {format_sig9(row.r), std::to_string(row.k),
                             format_sig9(row.delta), format_sig9(row.objective)});
      }
      write_csv_line(out, {"slope_fit", format_sig9(result.slope_fit)});
      write_csv_line(out, {"slope_theory", result.slope_theory
                                               ? format_sig9(*result.slope_theory)
                                               : "inapplicable"});
    } else if (minr->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      std::vector<std::size_t> ns;
      std::istringstream is(n_list);
      std::string token;
      while (std::getline(is, token, ',')) {
        long v = 0;
        try {
          v = std::stol(token);
        } catch (const std::exception&) {
          throw UsageError("--n-list entry is not an integer: " + token);
        }
        if (v < 2) throw UsageError("--n-list entries must be >= 2");
        ns.push_back(static_cast<std::size_t>(v));
      }
      if (ns.empty()) throw UsageError("--n-list must not be empty");
      const WeightingLandmarks lm = landmarks(params);
      write_csv_line(out, {"n", "r_min", "lower_qn", "upper_bound"});
      for (std::size_t size : ns) {
        const double found = min_r_certain(params, size);
        const double nd = static_cast<double>(size);
        write_csv_line(out, {std::to_string(size), format_sig9(found),
                             format_sig9(lm.unit_slope * nd),
                             format_sig9((nd - 1.0) * lm.inflection + 1.0)});
      }
    } else if (threshold->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      const WeightingLandmarks lm = landmarks(params);
      const UniformityThreshold ut = uniformity_threshold(params);
      nlohmann::json j;
      j["uniformity_n"] = ut.n;
      j["unit_slope_q"] = round9(lm.unit_slope);
      j["inflection"] = round9(lm.inflection);
      j["fixed_point"] = round9(lm.fixed_point);
      if (ut.heuristic) j["heuristic"] = true;
      out << j.dump(2) << '\n';
    } else if (compare->parsed()) {
      const WeightingParams params = validate(alpha, beta);
      const AllocationProblem problem =
          make_problem(n, r, parse_sense(sense_name), params);
      const SolveResult solver_result = dispatch_solve(problem);
      const OracleResult oracle_result =
          brute_force(problem, GridSpec::validated(step));
      const double gap =
          problem.sense == Sense::harm
              ? oracle_result.result.objective - solver_result.objective
              : solver_result.objective - oracle_result.result.objective;
      nlohmann::json j;
      j["solver"] = to_json(solver_result);
      j["oracle"] = to_json(oracle_result);
      j["gap"] = round9(gap);
      j["grid_bound"] = round9(discretization_bound(problem, step));
      out << j.dump(2) << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> with_program = args;
  with_program.insert(with_program.begin(), "pwalloc");
  std::vector<const char*> argv;
  argv.reserve(with_program.size());
  for (const auto& arg : with_program) argv.push_back(arg.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pwalloc::cli
