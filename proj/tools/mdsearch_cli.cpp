#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdsearch/adversaries.hpp"
#include "mdsearch/bounds.hpp"
#include "mdsearch/errors.hpp"
#include "mdsearch/evaluator.hpp"
#include "mdsearch/harness.hpp"
#include "mdsearch/solver.hpp"
#include "mdsearch/strategies.hpp"

using namespace mdsearch;

namespace {

struct Args {
  std::string shape;
  bool sort = false;
  std::string strategy;
  std::string adversary;
  std::string target;
  std::string trace;
  std::string out;
  std::uint64_t max_cells = 0;
  std::uint64_t max_states = 0;
  bool symmetry = false;
  // sweep only
  std::vector<std::string> ranges;
  std::vector<std::string> strategies;
  std::vector<std::string> adversaries;
  std::string evaluation = "full";
  bool all_orders = false;
};

GridShape shape_arg(const Args& a) {
  GridShape shape = parse_shape(a.shape);
  return a.sort ? sorted_non_increasing(shape) : shape;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  return file;
}

void write_trace(const std::string& path, const Transcript& t) {
  if (path.empty()) return;
  auto file = open_output(path);
  file << t.to_jsonl();
  if (!file) throw UsageError("cannot write '" + path + "'");
}

std::string field(const std::optional<double>& v) { return v ? format_real(*v) : "n/a"; }
std::string field(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "n/a"; }

int cmd_solve(const Args& a) {
  const GridShape shape = shape_arg(a);
  SolverOptions options;
  options.symmetry = a.symmetry;
  options.principal_line = !a.trace.empty();
  if (a.max_cells) options.max_cells = a.max_cells;
  if (a.max_states) options.max_states = a.max_states;
  const SolveReport r = exact_qc(shape, options);
  std::cout << "shape " << shape.to_string() << "\n"
            << "exact_qc " << r.value << "\n"
            << "states_explored " << r.states_explored << "\n"
            << "peak_memo " << r.peak_memo << "\n"
            << "heuristic " << (r.heuristic ? "true" : "false") << "\n"
            << "wall_ms " << format_real(r.wall_ms) << "\n";
  if (!a.trace.empty()) {
    Transcript t{shape, "exact", "optimal", std::nullopt, {}, Outcome::Found};
    for (const auto& [q, reply] : r.principal_line) t.events.push_back({q, reply});
    write_trace(a.trace, t);
  }
  return exit_code::kOk;
}

int cmd_evaluate(const Args& a) {
  const GridShape shape = shape_arg(a);
  const std::string id = a.strategy.empty() ? std::string(applicable_strategy(shape)) : a.strategy;
  auto strategy = make_strategy(id, shape);
  EvaluationOptions options;
  if (a.max_states) options.max_states = a.max_states;
  options.witness = !a.trace.empty();
  const EvaluationReport r = worst_case(*strategy, options);
  std::cout << "shape " << shape.to_string() << "\n"
            << "strategy " << id << "\n"
            << "worst_case " << r.worst_case << "\n"
            << "correct " << (r.correct ? "true" : "false") << "\n"
            << "nodes_visited " << r.nodes_visited << "\n"
            << "memo_entries " << r.memo_entries << "\n"
            << "wall_ms " << format_real(r.wall_ms) << "\n";
  if (shape.is_sorted_non_increasing()) {
    const double budget = budget_d(shape);
    std::cout << "budget_d " << format_real(budget) << "\n";
    if (!within_upper(static_cast<std::uint64_t>(r.worst_case), budget)) {
      std::cerr << "worst_case exceeds budget_d\n";
      return exit_code::kAssertionFailed;
    }
  }
  if (r.witness) write_trace(a.trace, *r.witness);
  return r.correct ? exit_code::kOk : exit_code::kAssertionFailed;
}

int cmd_simulate(const Args& a) {
  const GridShape shape = shape_arg(a);
  const std::string strategy_id = a.strategy.empty() ? std::string(applicable_strategy(shape)) : a.strategy;
  std::optional<Point> target;
  if (!a.target.empty()) {
    target = parse_point(a.target);
    if (!shape.contains(*target)) throw UsageError("target " + target->to_string() + " is outside " + shape.to_string());
  }
  std::string adversary_id = a.adversary.empty() ? (target ? "honest" : "greedy") : a.adversary;
  if (target && adversary_id != "honest") throw UsageError("--target is only meaningful with the honest adversary");
  if (adversary_id == "honest" && !target) throw UsageError("the honest adversary needs --target");

  std::shared_ptr<ExactSolver> solver;
  if (adversary_id == "optimal") {
    SolverOptions options;
    options.symmetry = a.symmetry;
    if (a.max_cells) options.max_cells = a.max_cells;
    if (a.max_states) options.max_states = a.max_states;
    solver = std::make_shared<ExactSolver>(shape, options);
    solver->solve();
  }
  auto strategy = make_strategy(strategy_id, shape);
  auto adversary = make_adversary(adversary_id, shape, target, solver);
  const Transcript t = run_match(*strategy, *adversary, target);
  std::cout << "shape " << shape.to_string() << "\n"
            << "strategy " << strategy_id << "\n"
            << "adversary " << adversary_id << "\n"
            << "queries " << t.total_queries() << "\n"
            << "outcome " << to_string(t.outcome) << "\n";
  write_trace(a.trace, t);
  return t.outcome == Outcome::Found ? exit_code::kOk : exit_code::kAssertionFailed;
}

int cmd_bounds(const Args& a) {
  const GridShape shape = shape_arg(a);
  const BoundsReport r = bounds_report(shape);
  std::cout << "shape " << shape.to_string() << "\n"
            << "lower_2d " << field(r.lower_2d) << "\n"
            << "per_segment_lower " << field(r.per_segment_lower) << "\n"
            << "upper_2d " << field(r.upper_2d) << "\n"
            << "lemma_upper_2d " << field(r.lemma_upper_2d) << "\n"
            << "lower_3d " << field(r.lower_3d) << "\n"
            << "lower_cube " << field(r.lower_cube) << "\n"
            << "budget_d " << field(r.budget_d) << "\n"
            << "consistent " << (r.consistent ? "true" : "false") << "\n";
  for (const auto& v : r.violations) std::cerr << "violation: " << v << "\n";
  return r.consistent ? exit_code::kOk : exit_code::kAssertionFailed;
}

int cmd_verify(const Args& a) {
  VerifyOptions options;
  if (a.max_cells) options.max_cells = a.max_cells;
  if (a.max_states) options.max_states = a.max_states;
  options.symmetry = a.symmetry;
  if (a.out.empty()) return run_verify(options, std::cout, std::cerr);
  auto file = open_output(a.out);
  return run_verify(options, file, std::cerr);
}

int cmd_sweep(const Args& a) {
  SweepConfig config;
  for (const auto& r : a.ranges) config.ranges.push_back(parse_range(r));
  config.strategies = a.strategies;
  config.adversaries = a.adversaries;
  config.evaluation = a.evaluation;
  if (a.max_cells) config.max_solver_cells = a.max_cells;
  if (a.max_states) config.max_states = a.max_states;
  config.symmetry = a.symmetry;
  config.sorted_only = !a.all_orders;
  validate(config);
  if (a.out.empty()) {
    run_sweep(config, std::cout);
    return exit_code::kOk;
  }
  auto file = open_output(a.out);
  run_sweep(config, file);
  if (!file) throw UsageError("cannot write '" + a.out + "'");
  return exit_code::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized binary search on d-dimensional grids"};
  app.require_subcommand(1);
  Args a;

  const std::vector<std::string> strategy_ids{"binary1d", "grid2d", "slicing"};
  const std::vector<std::string> adversary_ids{"greedy", "diagonal", "plane3d", "cube", "optimal", "honest"};

  auto add_shape = [&](CLI::App* sub) {
    sub->add_option("--shape", a.shape, "Grid sizes joined by 'x', e.g. 6x5x4")->required();
    sub->add_flag("--sort", a.sort, "Reorder sizes non-increasing");
  };
  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--max-cells", a.max_cells, "Cell cap for the exact solver");
    sub->add_option("--max-states", a.max_states, "State cap for searches");
  };

  auto* solve = app.add_subcommand("solve", "Exact query complexity of a small grid");
  add_shape(solve);
  add_caps(solve);
  solve->add_flag("--symmetry", a.symmetry, "Canonicalize states under grid symmetries");
  solve->add_option("--trace", a.trace, "Write the principal line as JSON lines");

  auto* evaluate = app.add_subcommand("evaluate", "Worst case of a strategy over every reply sequence");
  add_shape(evaluate);
  add_caps(evaluate);
  evaluate->add_option("--strategy", a.strategy)->check(CLI::IsMember(strategy_ids));
  evaluate->add_option("--trace", a.trace, "Write a worst-case witness as JSON lines");

  auto* simulate = app.add_subcommand("simulate", "Play one match");
  add_shape(simulate);
  add_caps(simulate);
  simulate->add_option("--strategy", a.strategy)->check(CLI::IsMember(strategy_ids));
  simulate->add_option("--adversary", a.adversary)->check(CLI::IsMember(adversary_ids));
  simulate->add_option("--target", a.target, "Target for the honest adversary, e.g. 1,2,2");
  simulate->add_flag("--symmetry", a.symmetry);
  simulate->add_option("--trace", a.trace, "Write the transcript as JSON lines");

  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds for a shape");
  add_shape(bounds);

  auto* verify = app.add_subcommand("verify", "Check bounds, solver, strategies and constructions on all small shapes");
  add_caps(verify);
  verify->add_flag("--symmetry", a.symmetry);
  verify->add_option("--out", a.out, "CSV output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "CSV sweep over a box of shapes");
  sweep->add_option("--range", a.ranges, "Size range per dimension, e.g. 2-64 (repeat per axis)")->required();
  sweep->add_option("--strategy", a.strategies)->check(CLI::IsMember(strategy_ids));
  sweep->add_option("--adversary", a.adversaries)->check(CLI::IsMember({"greedy", "diagonal", "plane3d", "cube"}));
  sweep->add_option("--eval", a.evaluation, "full, greedy or none")->check(CLI::IsMember({"full", "greedy", "none"}));
  sweep->add_flag("--all-orders", a.all_orders, "Include shapes that are not non-increasing");
  add_caps(sweep);
  sweep->add_flag("--symmetry", a.symmetry);
  sweep->add_option("--out", a.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    if (*solve) return cmd_solve(a);
    if (*evaluate) return cmd_evaluate(a);
    if (*simulate) return cmd_simulate(a);
    if (*bounds) return cmd_bounds(a);
    if (*verify) return cmd_verify(a);
    if (*sweep) return cmd_sweep(a);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return exit_code::kResourceCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::kAssertionFailed;
  }
  return exit_code::kUsage;
}
