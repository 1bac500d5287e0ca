// File formats: instances and solve reports as JSON documents, benchmark
// sweeps as CSV. The instance schema is {k, n, centers: [{capacity,
// penalty: {family, params}}], cost_matrix} with the matrix flattened
// row-major.
#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lbdd/core.hpp"

namespace lbdd {

using nlohmann::json;

inline json penalty_to_json(const PenaltySpec& p) {
  const char* family = nullptr;
  switch (p.family) {
    case PenaltySpec::Family::constant: family = "constant"; break;
    case PenaltySpec::Family::linear: family = "linear"; break;
    case PenaltySpec::Family::table: family = "table"; break;
  }
  return json{{"family", family}, {"params", p.params}};
}

inline PenaltySpec penalty_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  PenaltySpec p;
  p.params = j.at("params").get<std::vector<Cost>>();
  if (family == "constant") {
    p.family = PenaltySpec::Family::constant;
  } else if (family == "linear") {
    p.family = PenaltySpec::Family::linear;
  } else if (family == "table") {
    p.family = PenaltySpec::Family::table;
  } else {
    throw std::invalid_argument("lbdd: unknown penalty family: " + family);
  }
  return p;
}

inline json instance_to_json(const ProblemInstance& instance) {
  json centers = json::array();
  for (const auto& c : instance.centers) {
    centers.push_back(
        {{"capacity", c.capacity}, {"penalty", penalty_to_json(c.penalty)}});
  }
  return json{{"k", instance.k()},
              {"n", instance.n()},
              {"centers", std::move(centers)},
              {"cost_matrix", instance.cost_matrix.data()}};
}

inline ProblemInstance instance_from_json(const json& j) {
  ProblemInstance instance;
  const auto k = j.at("k").get<Count>();
  instance.demand_count = j.at("n").get<Count>();
  const auto& centers = j.at("centers");
  if (static_cast<Count>(centers.size()) != k) {
    throw std::invalid_argument("lbdd: centers array does not match k");
  }
  CenterId id = 0;
  for (const auto& c : centers) {
    instance.centers.push_back({id++, c.at("capacity").get<Count>(),
                                penalty_from_json(c.at("penalty"))});
  }
  instance.cost_matrix = CostMatrix(
      instance.demand_count, k, j.at("cost_matrix").get<std::vector<Cost>>());
  return instance;
}

inline void write_instance(const std::string& path,
                           const ProblemInstance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("lbdd: cannot write " + path);
  out << instance_to_json(instance).dump(2) << '\n';
}

inline ProblemInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("lbdd: cannot read " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

inline double ns_to_ms(std::int64_t ns) {
  return static_cast<double>(ns) / 1e6;
}

inline json report_to_json(const SolveReport& report) {
  return json{
      {"solver", report.solver},
      {"objective", report.objective},
      {"assignment", report.assignment.assignment},
      {"has_dummy_center", report.has_dummy_center},
      {"strict_surcharge", report.strict_surcharge},
      {"stats",
       {{"cycle_refine_calls", report.stats.cycle_refine_calls},
        {"path_refine_calls", report.stats.path_refine_calls},
        {"negative_cycles_removed", report.stats.negative_cycles_removed},
        {"negative_paths_removed", report.stats.negative_paths_removed},
        {"refinement_gain", report.stats.refinement_gain},
        {"transfers_applied", report.stats.transfers_applied},
        {"invariant_checks", report.stats.invariant_checks}}},
      {"timings",
       {{"index_update_ms", ns_to_ms(report.timings.index_update_ns)},
        {"bellman_ford_ms", ns_to_ms(report.timings.bellman_ford_ns)},
        {"other_ms", ns_to_ms(report.timings.other_ns())},
        {"total_ms", ns_to_ms(report.timings.total_ns)}}}};
}

// Reloads the fields needed to re-validate an emitted report against its
// instance: solver, objective, surcharge, and the assignment (loads are
// recounted; pass the center count including a dummy center, if any).
inline SolveReport report_from_json(const json& j, Count center_count) {
  SolveReport report;
  report.solver = j.at("solver").get<std::string>();
  report.objective = j.at("objective").get<Cost>();
  report.strict_surcharge = j.at("strict_surcharge").get<Cost>();
  report.has_dummy_center = j.at("has_dummy_center").get<bool>();
  report.assignment.assignment = j.at("assignment").get<std::vector<CenterId>>();
  report.assignment.load.assign(static_cast<std::size_t>(center_count), 0);
  for (const CenterId s : report.assignment.assignment) {
    if (s != kUnassigned) {
      ++report.assignment.load[static_cast<std::size_t>(s)];
    }
  }
  return report;
}

struct BenchRow {
  std::string solver;
  Count n = 0;
  Count k = 0;
  double theta = 0;
  Cost penalty_lo = 0;
  Cost penalty_hi = 0;
  double ratio = 0;
  std::uint64_t seed = 0;
  Cost objective = 0;
  PhaseTimings timings;
};

inline std::string bench_csv_header() {
  return "solver,n,k,theta,penalty_lo,penalty_hi,ratio,seed,objective,"
         "total_ms,index_update_ms,bellman_ford_ms,other_ms";
}

inline std::string bench_csv_row(const BenchRow& row) {
  std::ostringstream out;
  out << row.solver << ',' << row.n << ',' << row.k << ',' << row.theta << ','
      << row.penalty_lo << ',' << row.penalty_hi << ',' << row.ratio << ','
      << row.seed << ',' << row.objective << ',' << std::fixed
      << std::setprecision(3) << ns_to_ms(row.timings.total_ns) << ','
      << ns_to_ms(row.timings.index_update_ns) << ','
      << ns_to_ms(row.timings.bellman_ford_ns) << ','
      << ns_to_ms(row.timings.other_ns());
  return out.str();
}

}  // namespace lbdd
