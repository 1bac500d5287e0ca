// Core model types for load-balanced demand distribution: capacitated
// service centers with overload penalties, demand units, an assignment
// cost matrix, and the objective they induce.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbdd {

using Cost = std::int64_t;
using DemandId = std::int32_t;
using CenterId = std::int32_t;
using Count = std::int64_t;

inline constexpr CenterId kUnassigned = -1;

// Objective arithmetic is exact 64-bit integer math; overflow is a hard
// error, never silent wraparound.
inline Cost checked_add(Cost a, Cost b) {
  Cost r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("lbdd: cost accumulator overflow");
  }
  return r;
}

inline Cost checked_mul(Cost a, Cost b) {
  Cost r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("lbdd: cost accumulator overflow");
  }
  return r;
}

// Overload penalty schedule q(j): the extra cost of the j-th assignment
// beyond a center's capacity. Positive and non-decreasing in j.
struct PenaltySpec {
  enum class Family { constant, linear, table };

  Family family = Family::constant;
  // constant: {p}; linear: {base, step}; table: the values themselves.
  std::vector<Cost> params;

  static PenaltySpec constant(Cost p) { return {Family::constant, {p}}; }
  static PenaltySpec linear(Cost base, Cost step) {
    return {Family::linear, {base, step}};
  }
  static PenaltySpec table(std::vector<Cost> values) {
    return {Family::table, std::move(values)};
  }

  // q(j) for the j-th overload, j >= 1. Table lookups past the end clamp
  // to the last value.
  Cost at(Count j) const {
    if (j < 1) throw std::logic_error("lbdd: penalty index must be >= 1");
    switch (family) {
      case Family::constant:
        return params[0];
      case Family::linear:
        return checked_add(params[0], checked_mul(params[1], j - 1));
      case Family::table: {
        const auto idx = static_cast<std::size_t>(
            std::min<Count>(j, static_cast<Count>(params.size())));
        return params[idx - 1];
      }
    }
    throw std::logic_error("lbdd: bad penalty family");
  }

  // sum_{j=1..m} q(j); m == 0 yields 0.
  Cost total(Count m) const {
    if (m <= 0) return 0;
    switch (family) {
      case Family::constant:
        return checked_mul(params[0], m);
      case Family::linear: {
        // m*base + step*(0+1+...+(m-1))
        const Cost tri = checked_mul(m, m - 1) / 2;
        return checked_add(checked_mul(params[0], m),
                           checked_mul(params[1], tri));
      }
      case Family::table: {
        Cost sum = 0;
        for (Count j = 1; j <= m; ++j) sum = checked_add(sum, at(j));
        return sum;
      }
    }
    throw std::logic_error("lbdd: bad penalty family");
  }
};

struct ServiceCenter {
  CenterId id = 0;
  Count capacity = 0;
  PenaltySpec penalty;
};

// Dense n x k matrix of positive assignment costs, row-major by demand.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(Count n, Count k, std::vector<Cost> costs)
      : n_(n), k_(k), costs_(std::move(costs)) {
    if (static_cast<Count>(costs_.size()) != n_ * k_) {
      throw std::invalid_argument("lbdd: cost matrix size mismatch");
    }
  }

  Cost operator()(DemandId d, CenterId s) const {
    return costs_[static_cast<std::size_t>(d) * static_cast<std::size_t>(k_) +
                  static_cast<std::size_t>(s)];
  }

  Count rows() const { return n_; }
  Count cols() const { return k_; }
  const std::vector<Cost>& data() const { return costs_; }

 private:
  Count n_ = 0;
  Count k_ = 0;
  std::vector<Cost> costs_;
};

struct ProblemInstance {
  std::vector<ServiceCenter> centers;
  Count demand_count = 0;
  CostMatrix cost_matrix;

  Count k() const { return static_cast<Count>(centers.size()); }
  Count n() const { return demand_count; }

  Count total_capacity() const {
    Count total = 0;
    for (const auto& c : centers) total += c.capacity;
    return total;
  }
};

// A (partial or complete) demand -> center mapping plus per-center load
// counts. Complete once every demand is assigned.
struct Allotment {
  std::vector<CenterId> assignment;  // length n, kUnassigned when pending
  std::vector<Count> load;           // length k

  static Allotment empty(Count n, Count k) {
    Allotment a;
    a.assignment.assign(static_cast<std::size_t>(n), kUnassigned);
    a.load.assign(static_cast<std::size_t>(k), 0);
    return a;
  }

  bool complete() const {
    return std::none_of(assignment.begin(), assignment.end(),
                        [](CenterId s) { return s == kUnassigned; });
  }

  void assign(DemandId d, CenterId s) {
    auto& slot = assignment[static_cast<std::size_t>(d)];
    if (slot != kUnassigned) {
      throw std::logic_error("lbdd: demand already assigned");
    }
    slot = s;
    ++load[static_cast<std::size_t>(s)];
  }

  void move(DemandId d, CenterId to) {
    auto& slot = assignment[static_cast<std::size_t>(d)];
    if (slot == kUnassigned) {
      throw std::logic_error("lbdd: cannot move an unassigned demand");
    }
    --load[static_cast<std::size_t>(slot)];
    slot = to;
    ++load[static_cast<std::size_t>(to)];
  }

  // Recount loads from the assignment array; true when they match.
  bool loads_consistent() const {
    std::vector<Count> recount(load.size(), 0);
    for (CenterId s : assignment) {
      if (s == kUnassigned) continue;
      if (s < 0 || static_cast<std::size_t>(s) >= load.size()) return false;
      ++recount[static_cast<std::size_t>(s)];
    }
    return recount == load;
  }
};

// Penalty charged by the NEXT allotment to `center` given its current load:
// zero while below capacity, otherwise q(load - capacity + 1).
inline Cost marginal_penalty(const ServiceCenter& center, Count current_load) {
  if (current_load < 0) throw std::logic_error("lbdd: negative load");
  if (current_load < center.capacity) return 0;
  return center.penalty.at(current_load - center.capacity + 1);
}

// Penalty recovered by removing one unit from `center` at its current load:
// the most recently paid increment, zero when not overloaded.
inline Cost refund_penalty(const ServiceCenter& center, Count current_load) {
  if (current_load < 0) throw std::logic_error("lbdd: negative load");
  if (current_load <= center.capacity) return 0;
  return center.penalty.at(current_load - center.capacity);
}

// Total penalty owed by `center` at load L: sum of q(1..L-capacity).
inline Cost center_penalty_total(const ServiceCenter& center, Count load) {
  return center.penalty.total(load - center.capacity);
}

// Assignment cost plus overload penalties over the assigned demands only.
inline Cost evaluate_partial_objective(const ProblemInstance& instance,
                                       const Allotment& allotment) {
  if (static_cast<Count>(allotment.assignment.size()) != instance.n() ||
      static_cast<Count>(allotment.load.size()) != instance.k()) {
    throw std::invalid_argument("lbdd: allotment shape mismatch");
  }
  Cost total = 0;
  for (DemandId d = 0; d < instance.n(); ++d) {
    const CenterId s = allotment.assignment[static_cast<std::size_t>(d)];
    if (s == kUnassigned) continue;
    total = checked_add(total, instance.cost_matrix(d, s));
  }
  for (const auto& center : instance.centers) {
    const Count load = allotment.load[static_cast<std::size_t>(center.id)];
    total = checked_add(total, center_penalty_total(center, load));
  }
  return total;
}

// Assignment cost plus overload penalties, recomputed from scratch.
// Rejects incomplete allotments.
inline Cost evaluate_objective(const ProblemInstance& instance,
                               const Allotment& allotment) {
  if (!allotment.complete()) {
    throw std::invalid_argument("lbdd: objective of incomplete allotment");
  }
  return evaluate_partial_objective(instance, allotment);
}

struct ValidationResult {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

inline ValidationResult validate_instance(const ProblemInstance& instance) {
  ValidationResult result;
  auto fail = [&result](std::string msg) {
    result.errors.push_back(std::move(msg));
  };

  if (instance.k() < 1) fail("instance has no service centers (k < 1)");
  if (instance.n() < 1) fail("instance has no demand units (n < 1)");

  for (Count i = 0; i < instance.k(); ++i) {
    const auto& c = instance.centers[static_cast<std::size_t>(i)];
    const std::string tag = "center " + std::to_string(i) + ": ";
    if (c.id != static_cast<CenterId>(i)) fail(tag + "id mismatch");
    if (c.capacity < 0) fail(tag + "negative capacity");
    switch (c.penalty.family) {
      case PenaltySpec::Family::constant:
        if (c.penalty.params.size() != 1) {
          fail(tag + "constant penalty takes one parameter");
        } else if (c.penalty.params[0] <= 0) {
          fail(tag + "penalty not positive");
        }
        break;
      case PenaltySpec::Family::linear:
        if (c.penalty.params.size() != 2) {
          fail(tag + "linear penalty takes two parameters");
        } else if (c.penalty.params[0] <= 0 || c.penalty.params[1] < 0) {
          fail(tag + "penalty not positive");
        }
        break;
      case PenaltySpec::Family::table:
        if (c.penalty.params.empty()) {
          fail(tag + "empty penalty table");
        } else {
          if (c.penalty.params[0] <= 0) fail(tag + "penalty not positive");
          if (!std::is_sorted(c.penalty.params.begin(),
                              c.penalty.params.end())) {
            fail(tag + "penalty not monotone");
          }
        }
        break;
    }
  }

  if (instance.cost_matrix.rows() != instance.n() ||
      instance.cost_matrix.cols() != instance.k()) {
    fail("cost matrix dimension mismatch");
  } else {
    for (Cost v : instance.cost_matrix.data()) {
      if (v <= 0) {
        fail("non-positive cost in cost matrix");
        break;
      }
    }
  }
  return result;
}

inline void require_valid_instance(const ProblemInstance& instance) {
  const auto validation = validate_instance(instance);
  if (!validation.ok()) {
    throw std::invalid_argument("lbdd: invalid instance: " +
                                validation.errors.front());
  }
}

// Counters surfaced in a SolveReport.
struct SolveStats {
  std::int64_t cycle_refine_calls = 0;
  std::int64_t path_refine_calls = 0;
  std::int64_t negative_cycles_removed = 0;
  std::int64_t negative_paths_removed = 0;
  Cost refinement_gain = 0;  // total objective reduction from refinements
  std::int64_t transfers_applied = 0;
  std::int64_t invariant_checks = 0;
};

// Wall-clock phase breakdown: transfer-heap maintenance, lowest-cost-path
// search, and everything else.
struct PhaseTimings {
  std::int64_t index_update_ns = 0;
  std::int64_t bellman_ford_ns = 0;
  std::int64_t total_ns = 0;

  std::int64_t other_ns() const {
    const std::int64_t rest = total_ns - index_update_ns - bellman_ford_ns;
    return rest > 0 ? rest : 0;
  }
};

// Accumulates the wall time of its scope into one timing bucket.
class ScopedTimer {
 public:
  explicit ScopedTimer(std::int64_t& sink)
      : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;
  ~ScopedTimer() {
    sink_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                 std::chrono::steady_clock::now() - start_)
                 .count();
  }

 private:
  std::int64_t& sink_;
  std::chrono::steady_clock::time_point start_;
};

struct SolveReport {
  std::string solver;
  Cost objective = 0;
  Allotment assignment;
  SolveStats stats;
  PhaseTimings timings;
  // Strict mode with excess demand: objective excludes the fixed
  // preprocessing surcharge (n - sum c) * (max cost + 1), reported here,
  // and `assignment` may map demands to the synthetic center k.
  Cost strict_surcharge = 0;
  bool has_dummy_center = false;
};

}  // namespace lbdd
