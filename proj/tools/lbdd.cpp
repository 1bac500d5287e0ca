// Command-line front end: generate instances, run the solvers, verify
// against the exact reference, and sweep benchmark grids to CSV.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbdd/cli.hpp"

namespace {

std::pair<lbdd::Cost, lbdd::Cost> parse_penalty_range(const std::string& text) {
  const auto sep = text.find(':');
  if (sep == std::string::npos) {
    throw CLI::ValidationError("--penalty-range expects lo:hi, got " + text);
  }
  return {std::stoll(text.substr(0, sep)), std::stoll(text.substr(sep + 1))};
}

void apply_phases(const std::string& phases, lbdd::RunSpec& spec) {
  spec.relax_phase = false;
  spec.index_update_phase = false;
  std::istringstream in(phases);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "relaxation") {
      spec.relax_phase = true;
    } else if (token == "index_update") {
      spec.index_update_phase = true;
    } else if (!token.empty()) {
      throw CLI::ValidationError("unknown parallel phase: " + token);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Load-balanced demand distribution: solvers and benchmarks"};
  app.require_subcommand(1);

  lbdd::RunSpec spec;
  std::vector<std::string> penalty_ranges;
  std::string phases = "relaxation,index_update";

  auto add_generation_options = [&](CLI::App* cmd) {
    cmd->add_option("--seed", spec.seeds, "seed or comma-separated seed list")
        ->delimiter(',');
    cmd->add_option("--n", spec.n, "number of demand units");
    cmd->add_option("--ratio", spec.ratios,
                    "demand units per service center (list)")
        ->delimiter(',');
    cmd->add_option("--theta", spec.thetas,
                    "total capacity as a fraction of n (list)")
        ->delimiter(',');
    cmd->add_option("--penalty-range", penalty_ranges,
                    "penalty range lo:hi (list)")
        ->delimiter(',');
    cmd->add_option("--cost-source", spec.cost_source, "euclidean | road");
    cmd->add_option("--road-nodes", spec.road_nodes,
                    "road graph vertex count (0: n + k)");
    cmd->add_option("--road-avg-degree", spec.road_avg_degree,
                    "road graph average degree");
  };
  auto add_engine_options = [&](CLI::App* cmd) {
    cmd->add_option("--workers", spec.workers, "worker threads");
    cmd->add_option("--parallel-phases", phases,
                    "comma list of relaxation,index_update");
    cmd->add_flag("--refine-to-fixpoint", spec.refine_to_fixpoint,
                  "repeat path removal until no negative path remains");
    cmd->add_flag("--check-invariants", spec.check_invariants,
                  "verify the no-negative-cycle invariant after each step");
    cmd->add_option("--oracle-limit", spec.oracle_limit,
                    "max n the exact reference will accept");
  };

  auto* generate = app.add_subcommand("generate", "write a synthetic instance");
  add_generation_options(generate);
  generate->add_option("--out", spec.output_path,
                       "instance file (default: stdout)");

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  solve->add_option("--instance", spec.instance_path, "instance file")
      ->required();
  solve->add_option("--solver", spec.solver,
                    "asral | para-asral | strict | greedy | oracle");
  solve->add_option("--out", spec.output_path, "report file (default: stdout)");
  add_engine_options(solve);

  auto* verify = app.add_subcommand(
      "verify", "run asral, strict, and the exact reference; report gaps");
  verify->add_option("--instance", spec.instance_path, "instance file")
      ->required();
  verify->add_option("--out", spec.output_path, "report file (default: stdout)");
  add_engine_options(verify);

  auto* bench = app.add_subcommand(
      "bench", "sweep the parameter grid and emit one CSV row per run");
  add_generation_options(bench);
  bench->add_option("--solvers", spec.bench_solvers,
                    "solvers to sweep (comma list)")
      ->delimiter(',');
  bench->add_option("--out", spec.output_path, "CSV file (default: stdout)");
  add_engine_options(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!penalty_ranges.empty()) {
      spec.penalty_ranges.clear();
      for (const auto& text : penalty_ranges) {
        spec.penalty_ranges.push_back(parse_penalty_range(text));
      }
    }
    apply_phases(phases, spec);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
    return 1;
  }

  if (generate->parsed()) spec.command = lbdd::RunSpec::Command::generate;
  if (solve->parsed()) spec.command = lbdd::RunSpec::Command::solve;
  if (verify->parsed()) spec.command = lbdd::RunSpec::Command::verify;
  if (bench->parsed()) spec.command = lbdd::RunSpec::Command::bench;

  return lbdd::run(spec, std::cout, std::cerr);
}
