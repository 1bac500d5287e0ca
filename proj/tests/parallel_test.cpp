#include "lbdd/parallel.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lbdd/refine.hpp"
#include "lbdd/solver.hpp"
#include "test_util.hpp"

namespace {

using namespace lbdd;

Engine parallel_engine(WorkerPool& pool, std::int64_t chunking = 1) {
  ParallelConfig cfg;
  cfg.workers = pool.workers();
  cfg.chunking = chunking;
  return Engine{cfg, &pool};
}

TEST(WorkerPool, RunsEveryTaskExactlyOnce) {
  WorkerPool pool(4);
  std::vector<std::atomic<int>> hits(257);
  for (auto& h : hits) h.store(0);
  pool.run(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(WorkerPool, PropagatesTaskExceptions) {
  WorkerPool pool(4);
  EXPECT_THROW(pool.run(64,
                        [&](std::size_t i) {
                          if (i == 13) throw std::runtime_error("boom");
                        }),
               std::runtime_error);
  // pool stays usable afterwards
  std::atomic<int> count{0};
  pool.run(8, [&](std::size_t) { ++count; });
  EXPECT_EQ(count.load(), 8);
}

TEST(RelaxRound, SingleEdgeByHand) {
  AuxGraph g;
  g.anchor = 0;
  g.node_count = 2;
  g.add_edge(AuxEdge{0, 1, AuxEdgeKind::transfer, 0, -13});
  g.finalize();
  std::vector<Cost> din{0, detail::kUnreachable};
  std::vector<std::int32_t> pin{-1, -1};
  std::vector<Cost> dout(2);
  std::vector<std::int32_t> pout(2);
  const bool changed = parallel_relax_round(g, din, pin, dout, pout, Engine{});
  EXPECT_TRUE(changed);
  EXPECT_EQ(dout[0], 0);
  EXPECT_EQ(dout[1], -13);
  EXPECT_EQ(pout[1], 0);
}

TEST(RelaxRound, WorkerCountCannotChangeResults) {
  std::mt19937_64 rng(157);
  WorkerPool pool(8);
  const Engine par = parallel_engine(pool);
  for (int it = 0; it < 1000; ++it) {
    const Count k = 2 + static_cast<Count>(rng() % 6);
    const auto g = lbdd_test::random_acyclic_cost_graph(rng, k);
    const auto nodes = static_cast<std::size_t>(g.node_count);
    std::vector<Cost> din(nodes);
    std::vector<std::int32_t> pin(nodes, -1);
    for (auto& v : din) {
      v = (rng() % 4 == 0) ? detail::kUnreachable
                           : static_cast<Cost>(rng() % 100) - 50;
    }
    din[static_cast<std::size_t>(g.anchor_out())] = 0;

    std::vector<Cost> seq_d(nodes), par_d(nodes);
    std::vector<std::int32_t> seq_p(nodes), par_p(nodes);
    const bool seq_changed =
        parallel_relax_round(g, din, pin, seq_d, seq_p, Engine{});
    const bool par_changed = parallel_relax_round(g, din, pin, par_d, par_p, par);
    EXPECT_EQ(seq_changed, par_changed);
    EXPECT_EQ(seq_d, par_d);
    EXPECT_EQ(seq_p, par_p);
  }
}

TEST(LowestCostPath, ParallelMatchesSequential) {
  std::mt19937_64 rng(163);
  WorkerPool pool(8);
  const Engine par = parallel_engine(pool);
  for (int it = 0; it < 200; ++it) {
    const auto g = lbdd_test::random_acyclic_cost_graph(rng, 6);
    const auto seq = lowest_cost_path(g, Engine{});
    const auto parallel = lowest_cost_path(g, par);
    ASSERT_EQ(seq.has_value(), parallel.has_value());
    if (seq) {
      EXPECT_EQ(seq->cost, parallel->cost);
      EXPECT_EQ(seq->distances, parallel->distances);
      EXPECT_EQ(seq->parents, parallel->parents);
    }
  }
}

TEST(IndexUpdate, TwoCenterTransferTouchesBothHeaps) {
  ProblemInstance inst;
  inst.demand_count = 1;
  inst.centers.push_back({0, 1, PenaltySpec::constant(1)});
  inst.centers.push_back({1, 1, PenaltySpec::constant(1)});
  inst.cost_matrix = CostMatrix(1, 2, {3, 5});
  Allotment a = Allotment::empty(1, 2);
  a.assign(0, 0);
  auto index = build_index(inst, a);
  WorkerPool pool(2);
  const Engine eng = parallel_engine(pool);
  parallel_index_update(index, a, TransferEdge{0, 1, 0, 2}, eng);
  EXPECT_EQ(index.heap_size(0, 1), 0);
  EXPECT_EQ(index.heap_size(1, 0), 1);
  EXPECT_EQ(a.assignment[0], 1);
}

TEST(IndexUpdate, ScriptedTransfersMatchSequential) {
  std::mt19937_64 rng(167);
  lbdd_test::InstanceConfig cfg;
  cfg.n = 60;
  cfg.k = 6;
  auto inst = lbdd_test::random_instance(rng, cfg);
  Allotment seq_a = Allotment::empty(cfg.n, cfg.k);
  for (DemandId d = 0; d < cfg.n; ++d) {
    seq_a.assign(d, static_cast<CenterId>(rng() % static_cast<std::uint64_t>(cfg.k)));
  }
  Allotment par_a = seq_a;
  auto seq_index = build_index(inst, seq_a);
  auto par_index = build_index(inst, par_a);
  WorkerPool pool(8);
  const Engine par = parallel_engine(pool);

  for (int op = 0; op < 10000; ++op) {
    const auto d = static_cast<DemandId>(rng() % static_cast<std::uint64_t>(cfg.n));
    const CenterId from = seq_a.assignment[static_cast<std::size_t>(d)];
    auto to = static_cast<CenterId>(rng() % static_cast<std::uint64_t>(cfg.k));
    if (to == from) to = static_cast<CenterId>((to + 1) % cfg.k);
    const TransferEdge e{from, to, d,
                         inst.cost_matrix(d, to) - inst.cost_matrix(d, from)};
    seq_index.apply_transfer(seq_a, e);
    parallel_index_update(par_index, par_a, e, par);
  }

  EXPECT_EQ(seq_a.assignment, par_a.assignment);
  EXPECT_EQ(seq_a.load, par_a.load);
  for (CenterId i = 0; i < cfg.k; ++i) {
    for (CenterId j = 0; j < cfg.k; ++j) {
      if (i == j) continue;
      EXPECT_EQ(seq_index.heap_snapshot(i, j), par_index.heap_snapshot(i, j));
    }
  }
}

TEST(FullSolve, ParallelModeIsBitIdentical) {
  std::mt19937_64 rng(173);
  for (const int workers : {2, 4, 8}) {
    for (int it = 0; it < 8; ++it) {
      lbdd_test::InstanceConfig cfg;
      cfg.n = 30 + static_cast<Count>(rng() % 120);
      cfg.k = 2 + static_cast<Count>(rng() % 6);
      cfg.total_capacity = static_cast<Count>(rng() % (cfg.n + 1));
      auto inst = lbdd_test::random_instance(rng, cfg);

      const auto seq = asral_solve(inst);
      SolverOptions opts;
      opts.parallel = true;
      opts.parallel_config.workers = workers;
      opts.parallel_config.chunking = 1;  // force real task splitting
      const auto par = asral_solve(inst, opts);

      EXPECT_EQ(par.objective, seq.objective);
      EXPECT_EQ(par.assignment.assignment, seq.assignment.assignment);
      EXPECT_EQ(par.assignment.load, seq.assignment.load);
      EXPECT_EQ(par.stats.negative_cycles_removed,
                seq.stats.negative_cycles_removed);
      EXPECT_EQ(par.stats.negative_paths_removed,
                seq.stats.negative_paths_removed);
      EXPECT_EQ(par.stats.transfers_applied, seq.stats.transfers_applied);
    }
  }
}

TEST(FullSolve, PhaseSelectionStillExact) {
  std::mt19937_64 rng(179);
  lbdd_test::InstanceConfig cfg;
  cfg.n = 80;
  cfg.k = 5;
  cfg.total_capacity = 30;
  auto inst = lbdd_test::random_instance(rng, cfg);
  const auto seq = asral_solve(inst);
  for (const bool relax : {true, false}) {
    SolverOptions opts;
    opts.parallel = true;
    opts.parallel_config.workers = 4;
    opts.parallel_config.chunking = 1;
    opts.parallel_config.relax_phase = relax;
    opts.parallel_config.index_update_phase = !relax;
    const auto par = asral_solve(inst, opts);
    EXPECT_EQ(par.objective, seq.objective);
    EXPECT_EQ(par.assignment.assignment, seq.assignment.assignment);
  }
}

}  // namespace
