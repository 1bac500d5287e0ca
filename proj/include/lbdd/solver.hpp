// The solvers. asral_solve processes demands in ascending best-cost order,
// assigns each to its cheapest center, and re-adjusts the allotment after
// every step by cancelling negative transfer cycles and, on overload,
// migrating the overload along the most negative path. strict_solve is the
// capacity-respecting variant that provably reaches the optimum by keeping
// every center packed with surplus placeholders and evicting one per real
// assignment. greedy_solve is the same arrival loop with no re-adjustment.
#pragma once

#include <memory>
#include <numeric>
#include <queue>
#include <tuple>

#include "lbdd/core.hpp"
#include "lbdd/parallel.hpp"
#include "lbdd/refine.hpp"
#include "lbdd/subspace.hpp"

namespace lbdd {

struct SolverOptions {
  bool parallel = false;
  ParallelConfig parallel_config;
  bool check_invariants = false;
  // Keep removing negative paths after an overload until none remains
  // (default: one removal per overload event).
  bool refine_to_fixpoint = false;
  // Processing order for strict_solve; empty means ascending demand index.
  // The strict objective is order-independent.
  std::vector<DemandId> strict_order;
};

struct SolverState {
  const ProblemInstance* instance = nullptr;
  Allotment allotment;
  SubspaceIndex index;
  std::vector<Count> dummies;  // surplus placeholders per center (strict)
  bool strict = false;
  Cost delta = 0;  // running objective
  SolveStats stats;
  PhaseTimings timings;
  Engine engine;
  bool check_invariants = false;

  explicit SolverState(const ProblemInstance& inst)
      : instance(&inst),
        allotment(Allotment::empty(inst.n(), inst.k())),
        index(inst) {}

  std::vector<Count>* dummy_counts() { return strict ? &dummies : nullptr; }

  Count remaining_capacity(CenterId s) const {
    const Count cap = instance->centers[static_cast<std::size_t>(s)].capacity;
    const Count load = allotment.load[static_cast<std::size_t>(s)];
    return cap > load ? cap - load : 0;
  }

  // State over a preexisting allotment, with the running objective synced
  // to it. Used by tests and by refinement-level tooling.
  static SolverState from_allotment(const ProblemInstance& inst,
                                    const Allotment& allotment) {
    SolverState st(inst);
    st.allotment = allotment;
    st.index = build_index(inst, allotment);
    st.delta = evaluate_partial_objective(inst, allotment);
    return st;
  }
};

namespace detail {

// Cheapest center for each demand, smallest center id on ties.
inline CenterId row_min_center(const ProblemInstance& instance, DemandId d) {
  CenterId best = 0;
  for (CenterId s = 1; s < instance.k(); ++s) {
    if (instance.cost_matrix(d, s) < instance.cost_matrix(d, best)) best = s;
  }
  return best;
}

// (best cost, demand, best center) min-heap; equal costs pop in demand
// order, so runs are reproducible.
using ArrivalQueue =
    std::priority_queue<std::tuple<Cost, DemandId, CenterId>,
                        std::vector<std::tuple<Cost, DemandId, CenterId>>,
                        std::greater<>>;

inline ArrivalQueue build_arrival_queue(const ProblemInstance& instance) {
  ArrivalQueue queue;
  for (DemandId d = 0; d < instance.n(); ++d) {
    const CenterId s = row_min_center(instance, d);
    queue.emplace(instance.cost_matrix(d, s), d, s);
  }
  return queue;
}

struct EngineScope {
  std::unique_ptr<WorkerPool> pool;
  Engine engine;

  EngineScope(const SolverOptions& opts, bool parallel) {
    if (parallel && opts.parallel_config.workers > 1) {
      pool = std::make_unique<WorkerPool>(opts.parallel_config.workers);
    }
    engine = Engine{opts.parallel_config, pool.get()};
  }
};

inline SolveReport finish_report(SolverState& st, std::string solver,
                                 std::chrono::steady_clock::time_point start) {
  st.timings.total_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  if (!st.allotment.complete()) {
    throw std::logic_error("lbdd: solver produced an incomplete allotment");
  }
  const Cost recomputed = evaluate_objective(*st.instance, st.allotment);
  if (recomputed != st.delta) {
    throw std::logic_error("lbdd: tracked objective diverged from recount");
  }
  SolveReport report;
  report.solver = std::move(solver);
  report.objective = st.delta;
  report.assignment = std::move(st.allotment);
  report.stats = st.stats;
  report.timings = st.timings;
  return report;
}

}  // namespace detail

inline SolveReport asral_solve(const ProblemInstance& instance,
                               const SolverOptions& opts = {}) {
  require_valid_instance(instance);
  const auto start = std::chrono::steady_clock::now();

  detail::EngineScope scope(opts, opts.parallel);
  SolverState st(instance);
  st.engine = scope.engine;
  st.check_invariants = opts.check_invariants;

  auto queue = detail::build_arrival_queue(instance);
  while (!queue.empty()) {
    const auto [cost, d, s] = queue.top();
    queue.pop();
    {
      ScopedTimer t(st.timings.index_update_ns);
      st.index.insert(d, s);
    }
    st.allotment.assign(d, s);
    negative_cycle_refine(st, s);

    const auto& center = instance.centers[static_cast<std::size_t>(s)];
    const Count load = st.allotment.load[static_cast<std::size_t>(s)];
    if (load <= center.capacity) {
      st.delta = checked_add(st.delta, cost);
    } else {
      st.delta = checked_add(
          st.delta, checked_add(cost, refund_penalty(center, load)));
      auto outcome = negative_path_refine(st, s);
      while (opts.refine_to_fixpoint && outcome.applied &&
             st.allotment.load[static_cast<std::size_t>(s)] > center.capacity) {
        outcome = negative_path_refine(st, s);
      }
    }
  }
  return detail::finish_report(st, opts.parallel ? "para-asral" : "asral",
                               start);
}

inline SolveReport greedy_solve(const ProblemInstance& instance,
                                const SolverOptions& /*unused*/ = {}) {
  require_valid_instance(instance);
  const auto start = std::chrono::steady_clock::now();

  SolverState st(instance);
  auto queue = detail::build_arrival_queue(instance);
  while (!queue.empty()) {
    const auto [cost, d, s] = queue.top();
    queue.pop();
    st.allotment.assign(d, s);
    const auto& center = instance.centers[static_cast<std::size_t>(s)];
    const Count load = st.allotment.load[static_cast<std::size_t>(s)];
    st.delta = checked_add(
        st.delta, checked_add(cost, refund_penalty(center, load)));
  }
  return detail::finish_report(st, "greedy", start);
}

// Appends the synthetic overflow center: capacity n - sum(c), every
// assignment cost max(CM) + 1. Only meaningful when demand exceeds the
// total capacity.
inline ProblemInstance augment_with_dummy_center(const ProblemInstance& instance) {
  const Count deficit = instance.n() - instance.total_capacity();
  if (deficit <= 0) {
    throw std::invalid_argument("lbdd: no excess demand to absorb");
  }
  const Cost max_cost = *std::max_element(instance.cost_matrix.data().begin(),
                                          instance.cost_matrix.data().end());
  ProblemInstance aug;
  aug.demand_count = instance.n();
  aug.centers = instance.centers;
  aug.centers.push_back({static_cast<CenterId>(instance.k()), deficit,
                         PenaltySpec::constant(1)});
  std::vector<Cost> costs;
  costs.reserve(static_cast<std::size_t>(instance.n() * (instance.k() + 1)));
  for (DemandId d = 0; d < instance.n(); ++d) {
    for (CenterId s = 0; s < instance.k(); ++s) {
      costs.push_back(instance.cost_matrix(d, s));
    }
    costs.push_back(max_cost + 1);
  }
  aug.cost_matrix =
      CostMatrix(instance.n(), instance.k() + 1, std::move(costs));
  return aug;
}

// Optimal solver for the no-overload variant. Every center starts packed
// with zero-cost placeholders; each demand evicts one placeholder at the
// cheapest center that still holds any, followed by a cycle refinement.
// The placeholders surface as zero-cost edges out of centers with surplus
// capacity, which is exactly what makes the end state cycle-free and hence
// optimal. With excess demand the instance is first augmented with the
// overflow center; its fixed surcharge is reported separately and excluded
// from the objective.
inline SolveReport strict_solve(const ProblemInstance& instance,
                                const SolverOptions& opts = {}) {
  require_valid_instance(instance);
  const auto start = std::chrono::steady_clock::now();

  const bool excess = instance.total_capacity() < instance.n();
  const ProblemInstance augmented =
      excess ? augment_with_dummy_center(instance) : ProblemInstance{};
  const ProblemInstance& work = excess ? augmented : instance;
  const Count k = work.k();

  detail::EngineScope scope(opts, opts.parallel);
  SolverState st(work);
  st.engine = scope.engine;
  st.check_invariants = opts.check_invariants;
  st.strict = true;
  st.dummies.resize(static_cast<std::size_t>(k));
  for (Count s = 0; s < k; ++s) {
    st.dummies[static_cast<std::size_t>(s)] =
        work.centers[static_cast<std::size_t>(s)].capacity;
  }

  std::vector<DemandId> order = opts.strict_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(work.n()));
    std::iota(order.begin(), order.end(), 0);
  } else if (static_cast<Count>(order.size()) != work.n()) {
    throw std::invalid_argument("lbdd: strict order must cover every demand");
  }

  for (const DemandId d : order) {
    CenterId target = kUnassigned;
    for (CenterId s = 0; s < k; ++s) {
      if (st.dummies[static_cast<std::size_t>(s)] <= 0) continue;
      if (target == kUnassigned ||
          work.cost_matrix(d, s) < work.cost_matrix(d, target)) {
        target = s;
      }
    }
    if (target == kUnassigned) {
      throw std::logic_error("lbdd: no residual capacity left");
    }
    --st.dummies[static_cast<std::size_t>(target)];
    {
      ScopedTimer t(st.timings.index_update_ns);
      st.index.insert(d, target);
    }
    st.allotment.assign(d, target);
    st.delta = checked_add(st.delta, work.cost_matrix(d, target));
    negative_cycle_refine(st, target);
  }

  for (CenterId s = 0; s < k; ++s) {
    const Count load = st.allotment.load[static_cast<std::size_t>(s)];
    const Count cap = work.centers[static_cast<std::size_t>(s)].capacity;
    if (load > cap) {
      throw std::logic_error("lbdd: strict solve exceeded a capacity");
    }
    // placeholders keep every center exactly full throughout
    if (load + st.dummies[static_cast<std::size_t>(s)] != cap) {
      throw std::logic_error("lbdd: placeholder accounting out of balance");
    }
  }

  SolveReport report = detail::finish_report(st, "strict", start);
  if (excess) {
    const Count deficit = instance.n() - instance.total_capacity();
    const Cost max_cost = *std::max_element(
        instance.cost_matrix.data().begin(), instance.cost_matrix.data().end());
    report.strict_surcharge = checked_mul(deficit, max_cost + 1);
    report.has_dummy_center = true;
    report.objective -= report.strict_surcharge;
  }
  return report;
}

}  // namespace lbdd
