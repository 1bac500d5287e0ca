#include "lbdd/solver.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lbdd/oracle.hpp"
#include "test_util.hpp"

namespace {

using namespace lbdd;

ProblemInstance column_instance(std::vector<Cost> column, Count capacity,
                                Cost penalty) {
  ProblemInstance inst;
  inst.demand_count = static_cast<Count>(column.size());
  inst.centers.push_back({0, capacity, PenaltySpec::constant(penalty)});
  inst.cost_matrix =
      CostMatrix(inst.demand_count, 1, std::move(column));
  return inst;
}

TEST(Asral, SingleDemand) {
  ProblemInstance inst = column_instance({4}, 1, 10);
  auto report = asral_solve(inst);
  EXPECT_EQ(report.objective, 4);
  EXPECT_EQ(report.assignment.assignment[0], 0);
}

TEST(Asral, ForcedOverloadOnSingleCenter) {
  ProblemInstance inst = column_instance({4, 6}, 1, 10);
  auto report = asral_solve(inst);
  EXPECT_EQ(report.objective, 20);
  EXPECT_EQ(report.stats.negative_cycles_removed, 0);
  EXPECT_EQ(report.stats.negative_paths_removed, 0);
}

TEST(Asral, ReportObjectiveMatchesRecount) {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 60; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 1 + static_cast<Count>(rng() % 30);
    cfg.k = 1 + static_cast<Count>(rng() % 4);
    auto inst = lbdd_test::random_instance(rng, cfg);
    auto report = asral_solve(inst);
    EXPECT_TRUE(report.assignment.complete());
    EXPECT_TRUE(report.assignment.loads_consistent());
    EXPECT_EQ(report.objective, evaluate_objective(inst, report.assignment));
  }
}

TEST(Asral, BracketedByOracleAndGreedy) {
  std::mt19937_64 rng(67);
  for (int it = 0; it < 100; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 1 + static_cast<Count>(rng() % 30);
    cfg.k = 1 + static_cast<Count>(rng() % 4);
    auto inst = lbdd_test::random_instance(rng, cfg);
    const auto asral = asral_solve(inst);
    const auto greedy = greedy_solve(inst);
    const auto oracle = oracle_solve(inst, /*strict=*/false);
    EXPECT_LE(oracle.objective, asral.objective);
    EXPECT_LE(asral.objective, greedy.objective);
  }
}

TEST(Asral, InvariantCheckingRunsClean) {
  std::mt19937_64 rng(71);
  SolverOptions opts;
  opts.check_invariants = true;
  for (int it = 0; it < 25; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 5 + static_cast<Count>(rng() % 40);
    cfg.k = 2 + static_cast<Count>(rng() % 5);
    auto inst = lbdd_test::random_instance(rng, cfg);
    auto report = asral_solve(inst, opts);
    EXPECT_GT(report.stats.invariant_checks, 0);
  }
}

TEST(Asral, RefineToFixpointNeverWorse) {
  std::mt19937_64 rng(73);
  for (int it = 0; it < 40; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 5 + static_cast<Count>(rng() % 30);
    cfg.k = 2 + static_cast<Count>(rng() % 4);
    cfg.total_capacity = static_cast<Count>(rng() % (cfg.n / 2 + 1));
    auto inst = lbdd_test::random_instance(rng, cfg);
    SolverOptions fixpoint;
    fixpoint.refine_to_fixpoint = true;
    const auto base = asral_solve(inst);
    const auto more = asral_solve(inst, fixpoint);
    EXPECT_LE(more.objective, base.objective);
  }
}

TEST(Asral, RejectsInvalidInstance) {
  ProblemInstance inst = column_instance({0}, 1, 10);  // non-positive cost
  EXPECT_THROW(asral_solve(inst), std::invalid_argument);
}

TEST(Greedy, MatchesAsralOnSingleCenter) {
  ProblemInstance inst = column_instance({4, 6, 9}, 1, 10);
  EXPECT_EQ(greedy_solve(inst).objective, asral_solve(inst).objective);
}

TEST(Greedy, NeverBeatsAsral) {
  std::mt19937_64 rng(79);
  for (int it = 0; it < 100; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 1 + static_cast<Count>(rng() % 25);
    cfg.k = 1 + static_cast<Count>(rng() % 5);
    auto inst = lbdd_test::random_instance(rng, cfg);
    EXPECT_GE(greedy_solve(inst).objective, asral_solve(inst).objective);
  }
}

TEST(Strict, DiagonalOptimum) {
  ProblemInstance inst;
  inst.demand_count = 2;
  inst.centers.push_back({0, 1, PenaltySpec::constant(5)});
  inst.centers.push_back({1, 1, PenaltySpec::constant(5)});
  inst.cost_matrix = CostMatrix(2, 2, {1, 9, 9, 1});
  auto report = strict_solve(inst);
  EXPECT_EQ(report.objective, 2);
  EXPECT_EQ(report.assignment.assignment[0], 0);
  EXPECT_EQ(report.assignment.assignment[1], 1);
  EXPECT_EQ(report.strict_surcharge, 0);
  EXPECT_FALSE(report.has_dummy_center);
}

TEST(Strict, ExcessDemandPreprocessing) {
  ProblemInstance inst = column_instance({2, 3, 4}, 1, 10);
  auto report = strict_solve(inst);
  // the cheapest demand stays real; the other two land on the overflow
  // center at max+1 = 5 apiece
  EXPECT_EQ(report.objective, 2);
  EXPECT_EQ(report.strict_surcharge, 10);
  EXPECT_TRUE(report.has_dummy_center);
  EXPECT_EQ(report.assignment.assignment[0], 0);
  EXPECT_EQ(report.assignment.assignment[1], 1);  // overflow center id k=1
  EXPECT_EQ(report.assignment.assignment[2], 1);
  // augmented optimum: keeping any other demand real costs more
  EXPECT_EQ(report.objective + report.strict_surcharge, 12);
}

TEST(Strict, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(83);
  for (int it = 0; it < 60; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 1 + static_cast<Count>(rng() % 7);
    cfg.k = 1 + static_cast<Count>(rng() % 3);
    cfg.total_capacity = cfg.n + static_cast<Count>(rng() % 4);
    auto inst = lbdd_test::random_instance(rng, cfg);
    const Cost expected = lbdd_test::enumerate_best_strict(inst);
    ASSERT_GE(expected, 0);
    EXPECT_EQ(strict_solve(inst).objective, expected);
  }
}

TEST(Strict, MatchesOracleOnLargerRandoms) {
  std::mt19937_64 rng(89);
  for (int it = 0; it < 60; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 5 + static_cast<Count>(rng() % 40);
    cfg.k = 2 + static_cast<Count>(rng() % 5);
    cfg.total_capacity = cfg.n + static_cast<Count>(rng() % 20);
    auto inst = lbdd_test::random_instance(rng, cfg);
    EXPECT_EQ(strict_solve(inst).objective,
              oracle_solve(inst, /*strict=*/true).objective);
  }
}

TEST(Strict, NeverExceedsRealCapacity) {
  std::mt19937_64 rng(97);
  for (int it = 0; it < 50; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 2 + static_cast<Count>(rng() % 30);
    cfg.k = 1 + static_cast<Count>(rng() % 5);
    cfg.total_capacity = static_cast<Count>(rng() % (2 * cfg.n));
    auto inst = lbdd_test::random_instance(rng, cfg);
    auto report = strict_solve(inst);
    std::vector<Count> load(static_cast<std::size_t>(inst.k()), 0);
    for (DemandId d = 0; d < inst.n(); ++d) {
      const CenterId s = report.assignment.assignment[static_cast<std::size_t>(d)];
      if (s < inst.k()) ++load[static_cast<std::size_t>(s)];
    }
    for (Count s = 0; s < inst.k(); ++s) {
      EXPECT_LE(load[static_cast<std::size_t>(s)],
                inst.centers[static_cast<std::size_t>(s)].capacity);
    }
  }
}

TEST(Strict, ObjectiveIndependentOfProcessingOrder) {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 30; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 3 + static_cast<Count>(rng() % 20);
    cfg.k = 2 + static_cast<Count>(rng() % 4);
    cfg.total_capacity = cfg.n + static_cast<Count>(rng() % 10);
    auto inst = lbdd_test::random_instance(rng, cfg);
    const auto base = strict_solve(inst);
    SolverOptions shuffled;
    shuffled.strict_order.resize(static_cast<std::size_t>(cfg.n));
    std::iota(shuffled.strict_order.begin(), shuffled.strict_order.end(), 0);
    std::shuffle(shuffled.strict_order.begin(), shuffled.strict_order.end(), rng);
    EXPECT_EQ(strict_solve(inst, shuffled).objective, base.objective);
  }
}

// The running objective must match a from-scratch recount after every
// arrival, including overload events with their path adjustments. Mirrors
// the incremental loop with instrumentation enabled.
TEST(Solvers, TrackedDeltaExactness) {
  std::mt19937_64 rng(103);
  SolverOptions opts;
  opts.check_invariants = true;
  for (int it = 0; it < 30; ++it) {
    lbdd_test::InstanceConfig cfg;
    cfg.n = 5 + static_cast<Count>(rng() % 40);
    cfg.k = 2 + static_cast<Count>(rng() % 5);
    cfg.total_capacity = static_cast<Count>(rng() % (cfg.n + 1));
    auto inst = lbdd_test::random_instance(rng, cfg);
    for (auto solve : {&asral_solve, &strict_solve, &greedy_solve}) {
      auto report = (*solve)(inst, opts);
      if (report.has_dummy_center) continue;  // recounted internally
      EXPECT_EQ(report.objective, evaluate_objective(inst, report.assignment));
    }
  }
}

TEST(Solvers, TimingBucketsArePopulated) {
  std::mt19937_64 rng(107);
  lbdd_test::InstanceConfig cfg;
  cfg.n = 200;
  cfg.k = 6;
  cfg.total_capacity = 60;
  auto inst = lbdd_test::random_instance(rng, cfg);
  auto report = asral_solve(inst);
  EXPECT_GT(report.timings.total_ns, 0);
  EXPECT_GT(report.timings.index_update_ns, 0);
  EXPECT_GT(report.timings.bellman_ford_ns, 0);
  EXPECT_GE(report.timings.other_ns(), 0);
}

}  // namespace
