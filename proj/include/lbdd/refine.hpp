// Lowest-cost path search on anchored graphs (label-correcting, negative
// edges allowed) and the two allotment re-adjustment procedures built on
// it: cycle removal, which cancels the most negative transfer cycle
// through the anchor, and path removal, which migrates one unit of
// overload away from it. A label-setting search would not do here: the
// graphs carry negative edges by design.
#pragma once

#include <optional>

#include "lbdd/core.hpp"
#include "lbdd/parallel.hpp"
#include "lbdd/subspace.hpp"

namespace lbdd {

struct PathResult {
  Cost cost = 0;
  std::vector<AuxEdge> edges;  // ordered anchor-out -> ... -> anchor-in
  std::vector<Cost> distances;
  std::vector<std::int32_t> parents;  // parent edge id per node, -1 if none
};

// Minimum-cost anchor-out -> anchor-in path, or nullopt when anchor-in is
// unreachable. Runs at most node_count synchronous relaxation rounds; a
// distance still improving on the final round witnesses a negative cycle,
// which callers guarantee cannot exist, so it fails loudly.
inline std::optional<PathResult> lowest_cost_path(const AuxGraph& g,
                                                  const Engine& engine) {
  const auto nodes = static_cast<std::size_t>(g.node_count);
  std::vector<Cost> dist_a(nodes, detail::kUnreachable);
  std::vector<Cost> dist_b(nodes, detail::kUnreachable);
  std::vector<std::int32_t> par_a(nodes, -1);
  std::vector<std::int32_t> par_b(nodes, -1);
  dist_a[static_cast<std::size_t>(g.anchor_out())] = 0;

  auto* dist_in = &dist_a;
  auto* dist_out = &dist_b;
  auto* par_in = &par_a;
  auto* par_out = &par_b;
  for (std::int32_t round = 1; round <= g.node_count; ++round) {
    const bool changed =
        parallel_relax_round(g, *dist_in, *par_in, *dist_out, *par_out, engine);
    std::swap(dist_in, dist_out);
    std::swap(par_in, par_out);
    if (!changed) break;
    if (round == g.node_count) {
      throw std::logic_error(
          "lbdd: negative cycle witnessed in anchored graph");
    }
  }

  const auto sink = static_cast<std::size_t>(g.anchor_in());
  if ((*dist_in)[sink] >= detail::kUnreachable) return std::nullopt;

  PathResult result;
  result.cost = (*dist_in)[sink];
  result.distances = *dist_in;
  result.parents = *par_in;

  std::vector<bool> seen(nodes, false);
  std::int32_t node = g.anchor_in();
  while (node != g.anchor_out()) {
    if (seen[static_cast<std::size_t>(node)]) {
      throw std::logic_error("lbdd: lowest-cost path is not simple");
    }
    seen[static_cast<std::size_t>(node)] = true;
    const std::int32_t ei = result.parents[static_cast<std::size_t>(node)];
    if (ei < 0) throw std::logic_error("lbdd: broken parent chain");
    result.edges.push_back(g.edges[static_cast<std::size_t>(ei)]);
    node = g.edges[static_cast<std::size_t>(ei)].from;
  }
  std::reverse(result.edges.begin(), result.edges.end());

  Cost sum = 0;
  for (const auto& e : result.edges) sum = checked_add(sum, e.cost);
  if (sum != result.cost) {
    throw std::logic_error("lbdd: path cost does not match edge sum");
  }
  return result;
}

// Negative-cycle scan of the collapsed transfer graph (k nodes, cheapest
// edge per ordered pair): label-correcting passes from an implicit
// all-zero source until a fixed point, which a negative cycle prevents.
inline bool gamma_has_negative_cycle(const SubspaceIndex& index,
                                     const std::vector<Count>* dummies = nullptr) {
  const Count k = index.center_count();
  struct MinEdge {
    CenterId from;
    CenterId to;
    Cost cost;
  };
  std::vector<MinEdge> edges;
  for (CenterId u = 0; u < k; ++u) {
    for (CenterId v = 0; v < k; ++v) {
      if (u == v) continue;
      if (auto e = cheapest_pair_edge(index, u, v, dummies)) {
        edges.push_back({u, v, e->cost});
      }
    }
  }
  std::vector<Cost> dist(static_cast<std::size_t>(k), 0);
  for (Count pass = 0; pass <= k; ++pass) {
    bool changed = false;
    for (const auto& e : edges) {
      const Cost cand = dist[static_cast<std::size_t>(e.from)] + e.cost;
      if (cand < dist[static_cast<std::size_t>(e.to)]) {
        dist[static_cast<std::size_t>(e.to)] = cand;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

struct RefineOutcome {
  bool applied = false;
  Cost gain = 0;  // <= 0; the objective change
};

namespace detail {

template <typename State>
void assert_no_negative_cycle(State& st) {
  if (!st.check_invariants) return;
  ++st.stats.invariant_checks;
  if (gamma_has_negative_cycle(st.index, st.dummy_counts())) {
    throw std::logic_error("lbdd: negative cycle survived refinement");
  }
}

template <typename State>
void apply_path_edges(State& st, const AuxGraph& g,
                      const std::vector<AuxEdge>& edges) {
  for (const auto& e : edges) {
    switch (e.kind) {
      case AuxEdgeKind::transfer: {
        const TransferEdge te{g.node_center(e.from), g.node_center(e.to),
                              e.demand, e.cost};
        ScopedTimer t(st.timings.index_update_ns);
        parallel_index_update(st.index, st.allotment, te, st.engine);
        ++st.stats.transfers_applied;
        break;
      }
      case AuxEdgeKind::dummy: {
        auto* dummies = st.dummy_counts();
        if (dummies == nullptr ||
            (*dummies)[static_cast<std::size_t>(g.node_center(e.from))] <= 0) {
          throw std::logic_error("lbdd: placeholder transfer without surplus");
        }
        --(*dummies)[static_cast<std::size_t>(g.node_center(e.from))];
        ++(*dummies)[static_cast<std::size_t>(g.node_center(e.to))];
        break;
      }
      case AuxEdgeKind::penalty:
        if (&e != &edges.back()) {
          throw std::logic_error("lbdd: penalty edge inside a path");
        }
        break;  // pure objective adjustment, no state change
    }
  }
}

}  // namespace detail

// Cancels the most negative transfer cycle through `anchor`, if one
// exists. Loads are untouched (a cycle moves one unit in and one out of
// every center it visits), so the tracked objective changes by exactly the
// cycle cost. Afterwards the allotment subspace has no negative cycles.
template <typename State>
RefineOutcome negative_cycle_refine(State& st, CenterId anchor) {
  ++st.stats.cycle_refine_calls;
  const AuxGraph g = build_negcycle_graph(st.index, anchor, st.dummy_counts());
  std::optional<PathResult> path;
  {
    ScopedTimer t(st.timings.bellman_ford_ns);
    path = lowest_cost_path(g, st.engine);
  }
  RefineOutcome outcome;
  if (path && path->cost < 0) {
    detail::apply_path_edges(st, g, path->edges);
    st.delta = checked_add(st.delta, path->cost);
    ++st.stats.negative_cycles_removed;
    st.stats.refinement_gain =
        checked_add(st.stats.refinement_gain, -path->cost);
    outcome = {true, path->cost};
  }
  detail::assert_no_negative_cycle(st);
  return outcome;
}

// Migrates one unit of overload away from `anchor` along the most negative
// transfer chain, closing with the penalty-difference edge. The anchor
// sheds one unit, the chain's terminal center gains one; the tracked
// objective changes by the full path cost including the closing edge.
template <typename State>
RefineOutcome negative_path_refine(State& st, CenterId anchor) {
  ++st.stats.path_refine_calls;
  const AuxGraph g =
      build_negpath_graph(st.index, st.allotment, *st.instance, anchor);
  std::optional<PathResult> path;
  {
    ScopedTimer t(st.timings.bellman_ford_ns);
    path = lowest_cost_path(g, st.engine);
  }
  RefineOutcome outcome;
  if (path && path->cost < 0) {
    if (path->edges.empty() || path->edges.back().kind != AuxEdgeKind::penalty) {
      throw std::logic_error("lbdd: path must close with a penalty edge");
    }
    detail::apply_path_edges(st, g, path->edges);
    st.delta = checked_add(st.delta, path->cost);
    ++st.stats.negative_paths_removed;
    st.stats.refinement_gain =
        checked_add(st.stats.refinement_gain, -path->cost);
    outcome = {true, path->cost};
  }
  detail::assert_no_negative_cycle(st);
  return outcome;
}

}  // namespace lbdd
