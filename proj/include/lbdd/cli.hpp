// Command execution behind the CLI front end: instance generation, single
// solves with report emission, verification runs against the exact
// reference, and benchmark sweeps over the cross-product of parameter
// lists.
#pragma once

#include <iostream>
#include <optional>

#include "lbdd/core.hpp"
#include "lbdd/instgen.hpp"
#include "lbdd/io.hpp"
#include "lbdd/oracle.hpp"
#include "lbdd/solver.hpp"

namespace lbdd {

struct RunSpec {
  enum class Command { generate, solve, verify, bench };

  Command command = Command::solve;
  std::string solver = "asral";  // asral | para-asral | strict | greedy | oracle
  std::string instance_path;
  std::string output_path;  // empty: write to stdout

  // generation / sweep parameters
  Count n = 100;
  std::vector<double> thetas{0.7};
  std::vector<std::pair<Cost, Cost>> penalty_ranges{{1, 200}};
  std::vector<double> ratios{10.0};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> bench_solvers{"asral", "greedy"};
  std::string cost_source = "euclidean";
  Count road_nodes = 0;
  double road_avg_degree = 4.0;

  // engine knobs
  int workers = 1;
  bool relax_phase = true;
  bool index_update_phase = true;
  bool refine_to_fixpoint = false;
  bool check_invariants = false;
  Count oracle_limit = 2000;
};

namespace cli_detail {

inline GenConfig gen_config(const RunSpec& spec, double theta,
                            std::pair<Cost, Cost> penalty_range, double ratio,
                            std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.n = spec.n;
  cfg.ratio = ratio;
  cfg.theta = theta;
  cfg.penalty_range = penalty_range;
  if (spec.cost_source == "euclidean") {
    cfg.cost_source = GenConfig::CostSource::euclidean;
  } else if (spec.cost_source == "road" || spec.cost_source == "road_graph") {
    cfg.cost_source = GenConfig::CostSource::road_graph;
  } else {
    throw std::invalid_argument("lbdd: unknown cost source: " +
                                spec.cost_source);
  }
  cfg.road.nodes = spec.road_nodes;
  cfg.road.avg_degree = spec.road_avg_degree;
  return cfg;
}

inline SolverOptions solver_options(const RunSpec& spec, bool parallel) {
  SolverOptions opts;
  opts.parallel = parallel;
  opts.parallel_config.workers = spec.workers;
  opts.parallel_config.relax_phase = spec.relax_phase;
  opts.parallel_config.index_update_phase = spec.index_update_phase;
  opts.check_invariants = spec.check_invariants;
  opts.refine_to_fixpoint = spec.refine_to_fixpoint;
  return opts;
}

inline SolveReport dispatch_solver(const std::string& solver,
                                   const ProblemInstance& instance,
                                   const RunSpec& spec) {
  if (solver == "asral") {
    return asral_solve(instance, solver_options(spec, false));
  }
  if (solver == "para-asral") {
    return asral_solve(instance, solver_options(spec, true));
  }
  if (solver == "strict") {
    return strict_solve(instance, solver_options(spec, false));
  }
  if (solver == "greedy") {
    return greedy_solve(instance, solver_options(spec, false));
  }
  if (solver == "oracle") {
    const auto start = std::chrono::steady_clock::now();
    auto result = oracle_solve(instance, /*strict=*/false, spec.oracle_limit);
    SolveReport report;
    report.solver = "oracle";
    report.objective = result.objective;
    report.assignment.assignment = std::move(result.assignment);
    report.assignment.load.assign(static_cast<std::size_t>(instance.k()), 0);
    for (const CenterId s : report.assignment.assignment) {
      ++report.assignment.load[static_cast<std::size_t>(s)];
    }
    report.timings.total_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start)
            .count();
    return report;
  }
  throw std::invalid_argument("lbdd: unknown solver: " + solver);
}

inline void emit(const RunSpec& spec, const std::string& text,
                 std::ostream& out) {
  if (spec.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(spec.output_path);
  if (!file) {
    throw std::runtime_error("lbdd: cannot write " + spec.output_path);
  }
  file << text;
}

inline int run_generate(const RunSpec& spec, std::ostream& out) {
  const auto cfg = gen_config(spec, spec.thetas.front(),
                              spec.penalty_ranges.front(), spec.ratios.front(),
                              spec.seeds.front());
  const auto instance = generate(cfg);
  emit(spec, instance_to_json(instance).dump(2) + "\n", out);
  return 0;
}

inline int run_solve(const RunSpec& spec, std::ostream& out) {
  const auto instance = read_instance(spec.instance_path);
  const auto report = dispatch_solver(spec.solver, instance, spec);
  emit(spec, report_to_json(report).dump(2) + "\n", out);
  return 0;
}

inline int run_verify(const RunSpec& spec, std::ostream& out) {
  const auto instance = read_instance(spec.instance_path);
  const auto asral = asral_solve(instance, solver_options(spec, false));
  const auto strict = strict_solve(instance, solver_options(spec, false));
  const auto oracle_pen =
      oracle_solve(instance, /*strict=*/false, spec.oracle_limit);
  const auto oracle_strict =
      oracle_solve(instance, /*strict=*/true, spec.oracle_limit);

  const Cost asral_gap = asral.objective - oracle_pen.objective;
  const Cost strict_gap = strict.objective - oracle_strict.objective;
  json record{{"asral", asral.objective},
              {"greedy", greedy_solve(instance).objective},
              {"strict", strict.objective},
              {"strict_surcharge", strict.strict_surcharge},
              {"oracle", oracle_pen.objective},
              {"oracle_strict", oracle_strict.objective},
              {"asral_gap", asral_gap},
              {"strict_gap", strict_gap}};
  std::ostringstream text;
  text << "asral_gap " << asral_gap << "\n"
       << "strict_gap " << strict_gap << "\n"
       << record.dump(2) << "\n";
  emit(spec, text.str(), out);
  return strict_gap == 0 ? 0 : 2;  // strict must meet the reference exactly
}

inline int run_bench(const RunSpec& spec, std::ostream& out) {
  std::ostringstream csv;
  csv << bench_csv_header() << "\n";
  for (const auto& solver : spec.bench_solvers) {
    for (const double theta : spec.thetas) {
      for (const auto& penalty_range : spec.penalty_ranges) {
        for (const double ratio : spec.ratios) {
          for (const std::uint64_t seed : spec.seeds) {
            const auto cfg =
                gen_config(spec, theta, penalty_range, ratio, seed);
            const auto instance = generate(cfg);
            const auto report = dispatch_solver(solver, instance, spec);
            BenchRow row;
            row.solver = solver;
            row.n = instance.n();
            row.k = instance.k();
            row.theta = theta;
            row.penalty_lo = penalty_range.first;
            row.penalty_hi = penalty_range.second;
            row.ratio = ratio;
            row.seed = seed;
            row.objective = report.objective;
            row.timings = report.timings;
            csv << bench_csv_row(row) << "\n";
          }
        }
      }
    }
  }
  emit(spec, csv.str(), out);
  return 0;
}

}  // namespace cli_detail

// Executes one command; writes artifacts to spec.output_path (or `out`),
// reports failures as a JSON error record on `err` with a nonzero exit.
inline int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.command) {
      case RunSpec::Command::generate: return cli_detail::run_generate(spec, out);
      case RunSpec::Command::solve: return cli_detail::run_solve(spec, out);
      case RunSpec::Command::verify: return cli_detail::run_verify(spec, out);
      case RunSpec::Command::bench: return cli_detail::run_bench(spec, out);
    }
    err << json{{"error", "unknown command"}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace lbdd
