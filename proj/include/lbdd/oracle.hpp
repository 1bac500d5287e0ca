// Exact reference solver, used for verification and gap reporting only.
// The instance reduces to a min-cost flow: unit arcs source -> demand,
// assignment arcs demand -> center at matrix cost, and per-center arcs to
// the sink whose costs walk up the overload schedule (convex, so the
// reduction is exact). Solved by successive shortest paths with node
// potentials; everything is integer arithmetic, so the optimum is exact.
#pragma once

#include <queue>

#include "lbdd/core.hpp"

namespace lbdd {

struct FlowArc {
  std::int32_t to = 0;
  std::int32_t rev = 0;  // index of the paired reverse arc in adj[to]
  Cost capacity = 0;     // residual
  Cost cost = 0;
};

struct FlowNetwork {
  Count demand_count = 0;
  Count center_count = 0;  // including a synthetic overflow center, if any
  std::vector<std::vector<FlowArc>> adj;

  std::int32_t source() const { return 0; }
  std::int32_t demand_node(DemandId d) const { return 1 + d; }
  std::int32_t center_node(CenterId s) const {
    return static_cast<std::int32_t>(1 + demand_count + s);
  }
  std::int32_t sink() const {
    return static_cast<std::int32_t>(1 + demand_count + center_count);
  }
  std::int32_t node_count() const {
    return static_cast<std::int32_t>(demand_count + center_count + 2);
  }

  void add_arc(std::int32_t from, std::int32_t to, Cost capacity, Cost cost) {
    adj[static_cast<std::size_t>(from)].push_back(
        {to, static_cast<std::int32_t>(adj[static_cast<std::size_t>(to)].size()),
         capacity, cost});
    adj[static_cast<std::size_t>(to)].push_back(
        {from,
         static_cast<std::int32_t>(adj[static_cast<std::size_t>(from)].size()) - 1,
         0, -cost});
  }

  // Costs of the center -> sink arcs in emission order; must be
  // non-decreasing for the convex-cost modeling to be exact.
  std::vector<Cost> center_sink_costs(CenterId s) const {
    std::vector<Cost> out;
    for (const auto& arc : adj[static_cast<std::size_t>(center_node(s))]) {
      if (arc.to == sink() && arc.cost >= 0) out.push_back(arc.cost);
    }
    return out;
  }
};

struct OracleResult {
  Cost objective = 0;
  std::vector<CenterId> assignment;
  Cost surcharge = 0;
  bool has_dummy_center = false;
};

namespace oracle_detail {

struct SinkArcPlan {
  Cost capacity;
  Cost cost;
};

// Per-center sink arcs: free slots first, then the overload schedule with
// runs of equal increments folded into one arc. Total capacity n per
// center, which is all any center can ever receive.
inline std::vector<SinkArcPlan> sink_arc_plan(const ServiceCenter& center,
                                              Count n, bool strict) {
  std::vector<SinkArcPlan> plan;
  const Count free_slots = std::min<Count>(center.capacity, n);
  if (free_slots > 0) plan.push_back({free_slots, 0});
  if (!strict) {
    Count run = 0;
    Cost run_cost = 0;
    for (Count j = 1; j <= n - free_slots; ++j) {
      const Cost q = center.penalty.at(j);
      if (run > 0 && q == run_cost) {
        ++run;
      } else {
        if (run > 0) plan.push_back({run, run_cost});
        run = 1;
        run_cost = q;
      }
    }
    if (run > 0) plan.push_back({run, run_cost});
  }
  return plan;
}

}  // namespace oracle_detail

// `strict` ignores penalties and forbids overload; when demand exceeds the
// total capacity it adds the overflow center (capacity n - sum c, cost
// max + 1) exactly as the strict solver's preprocessing does.
inline FlowNetwork build_flow_network(const ProblemInstance& instance,
                                      bool strict) {
  const Count n = instance.n();
  const Count k = instance.k();
  const bool excess = strict && instance.total_capacity() < n;

  FlowNetwork net;
  net.demand_count = n;
  net.center_count = excess ? k + 1 : k;
  net.adj.resize(static_cast<std::size_t>(net.node_count()));

  for (DemandId d = 0; d < n; ++d) {
    net.add_arc(net.source(), net.demand_node(d), 1, 0);
  }
  const Cost max_cost = *std::max_element(instance.cost_matrix.data().begin(),
                                          instance.cost_matrix.data().end());
  for (DemandId d = 0; d < n; ++d) {
    for (CenterId s = 0; s < k; ++s) {
      net.add_arc(net.demand_node(d), net.center_node(s), 1,
                  instance.cost_matrix(d, s));
    }
    if (excess) {
      net.add_arc(net.demand_node(d), net.center_node(static_cast<CenterId>(k)),
                  1, max_cost + 1);
    }
  }
  for (CenterId s = 0; s < k; ++s) {
    for (const auto& arc : oracle_detail::sink_arc_plan(
             instance.centers[static_cast<std::size_t>(s)], n, strict)) {
      net.add_arc(net.center_node(s), net.sink(), arc.capacity, arc.cost);
    }
  }
  if (excess) {
    net.add_arc(net.center_node(static_cast<CenterId>(k)), net.sink(),
                n - instance.total_capacity(), 0);
  }
  return net;
}

inline OracleResult oracle_solve(const ProblemInstance& instance, bool strict,
                                 Count size_limit = 2000) {
  require_valid_instance(instance);
  if (instance.n() > size_limit) {
    throw std::invalid_argument("lbdd: instance exceeds the oracle size limit");
  }

  FlowNetwork net = build_flow_network(instance, strict);
  const auto nodes = static_cast<std::size_t>(net.node_count());
  const Cost inf = std::numeric_limits<Cost>::max() / 4;

  std::vector<Cost> potential(nodes, 0);
  std::vector<Cost> dist(nodes);
  std::vector<std::int32_t> parent_node(nodes);
  std::vector<std::int32_t> parent_arc(nodes);

  Cost objective = 0;
  Count flow = 0;
  while (flow < instance.n()) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent_node.begin(), parent_node.end(), -1);
    dist[static_cast<std::size_t>(net.source())] = 0;
    using Item = std::pair<Cost, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0, net.source());
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[static_cast<std::size_t>(u)]) continue;
      const auto& arcs = net.adj[static_cast<std::size_t>(u)];
      for (std::int32_t ai = 0; ai < static_cast<std::int32_t>(arcs.size());
           ++ai) {
        const auto& arc = arcs[static_cast<std::size_t>(ai)];
        if (arc.capacity <= 0) continue;
        const Cost reduced = arc.cost + potential[static_cast<std::size_t>(u)] -
                             potential[static_cast<std::size_t>(arc.to)];
        if (reduced < 0) {
          throw std::logic_error("lbdd: negative reduced cost in oracle");
        }
        const Cost cand = du + reduced;
        if (cand < dist[static_cast<std::size_t>(arc.to)]) {
          dist[static_cast<std::size_t>(arc.to)] = cand;
          parent_node[static_cast<std::size_t>(arc.to)] = u;
          parent_arc[static_cast<std::size_t>(arc.to)] = ai;
          pq.emplace(cand, arc.to);
        }
      }
    }
    const Cost sink_dist = dist[static_cast<std::size_t>(net.sink())];
    if (sink_dist >= inf) {
      throw std::runtime_error("lbdd: infeasible flow instance");
    }
    for (std::size_t v = 0; v < nodes; ++v) {
      potential[v] += std::min(dist[v], sink_dist);
    }

    // bottleneck (always 1 here: each path crosses a unit demand arc)
    Cost push = inf;
    for (std::int32_t v = net.sink(); v != net.source();
         v = parent_node[static_cast<std::size_t>(v)]) {
      const std::int32_t u = parent_node[static_cast<std::size_t>(v)];
      const auto& arc = net.adj[static_cast<std::size_t>(u)]
                            [static_cast<std::size_t>(
                                parent_arc[static_cast<std::size_t>(v)])];
      push = std::min(push, arc.capacity);
    }
    for (std::int32_t v = net.sink(); v != net.source();
         v = parent_node[static_cast<std::size_t>(v)]) {
      const std::int32_t u = parent_node[static_cast<std::size_t>(v)];
      auto& arc = net.adj[static_cast<std::size_t>(u)]
                      [static_cast<std::size_t>(
                          parent_arc[static_cast<std::size_t>(v)])];
      arc.capacity -= push;
      net.adj[static_cast<std::size_t>(arc.to)][static_cast<std::size_t>(arc.rev)]
          .capacity += push;
      objective = checked_add(objective, checked_mul(arc.cost, push));
    }
    flow += push;
  }

  OracleResult result;
  result.assignment.assign(static_cast<std::size_t>(instance.n()), kUnassigned);
  for (DemandId d = 0; d < instance.n(); ++d) {
    for (const auto& arc :
         net.adj[static_cast<std::size_t>(net.demand_node(d))]) {
      if (arc.cost > 0 && arc.capacity == 0 && arc.to != net.source()) {
        result.assignment[static_cast<std::size_t>(d)] =
            static_cast<CenterId>(arc.to - 1 - instance.n());
        break;
      }
    }
  }
  result.objective = objective;
  if (strict && instance.total_capacity() < instance.n()) {
    const Count deficit = instance.n() - instance.total_capacity();
    const Cost max_cost = *std::max_element(
        instance.cost_matrix.data().begin(), instance.cost_matrix.data().end());
    result.surcharge = checked_mul(deficit, max_cost + 1);
    result.has_dummy_center = true;
    result.objective -= result.surcharge;
  }
  return result;
}

}  // namespace lbdd
