// Transfer-heap index over the current allotment: one addressable min-heap
// per ordered pair of service centers, keyed by the cost of moving a demand
// unit from the first center to the second. The index answers "cheapest
// transfer from u to v" in O(1) and is the source for the anchored
// auxiliary graphs used by cycle and path refinement.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lbdd/core.hpp"

namespace lbdd {

// A candidate move of one demand unit between centers. cost is
// CM(demand, to) - CM(demand, from) and may be negative.
struct TransferEdge {
  CenterId from = 0;
  CenterId to = 0;
  DemandId demand = 0;
  Cost cost = 0;
};

class SubspaceIndex {
 public:
  explicit SubspaceIndex(const ProblemInstance& instance)
      : k_(instance.k()),
        n_(instance.n()),
        cm_(&instance.cost_matrix),
        heaps_(static_cast<std::size_t>(k_ * k_)),
        pos_(static_cast<std::size_t>(n_ * k_), -1),
        home_(static_cast<std::size_t>(n_), kUnassigned) {}

  Count center_count() const { return k_; }
  Count demand_count() const { return n_; }

  // Center the demand is currently indexed under, kUnassigned if absent.
  CenterId home(DemandId d) const {
    return home_[static_cast<std::size_t>(d)];
  }

  // Adds `demand` to the k-1 heaps rooted at `center`. Double insertion is
  // a hard error.
  void insert(DemandId demand, CenterId center) {
    if (home_[static_cast<std::size_t>(demand)] != kUnassigned) {
      throw std::logic_error("lbdd: demand already indexed");
    }
    for (CenterId j = 0; j < k_; ++j) {
      if (j == center) continue;
      heap_push(center, j,
                Entry{(*cm_)(demand, j) - (*cm_)(demand, center), demand});
    }
    home_[static_cast<std::size_t>(demand)] = center;
  }

  // Removes `demand` from the k-1 heaps rooted at `center`. Removing a
  // demand that is not indexed there is a hard error.
  void remove(DemandId demand, CenterId center) {
    if (home_[static_cast<std::size_t>(demand)] != center) {
      throw std::logic_error("lbdd: demand not indexed under center");
    }
    for (CenterId j = 0; j < k_; ++j) {
      if (j == center) continue;
      heap_erase(center, j, demand);
    }
    home_[static_cast<std::size_t>(demand)] = kUnassigned;
  }

  // Cheapest transfer from -> to, if any demand sits at `from`. Ties break
  // on the smaller demand index.
  std::optional<TransferEdge> min_transfer(CenterId from, CenterId to) const {
    if (from == to) {
      throw std::logic_error("lbdd: min_transfer requires distinct centers");
    }
    const auto& h = heaps_[heap_slot(from, to)];
    if (h.data.empty()) return std::nullopt;
    return TransferEdge{from, to, h.data[0].demand, h.data[0].key};
  }

  // Rejects edges that no longer describe the current allotment.
  void transfer_validate(const Allotment& allotment,
                         const TransferEdge& e) const {
    if (e.from == e.to) {
      throw std::logic_error("lbdd: transfer with identical endpoints");
    }
    if (home_[static_cast<std::size_t>(e.demand)] != e.from ||
        allotment.assignment[static_cast<std::size_t>(e.demand)] != e.from) {
      throw std::logic_error("lbdd: stale transfer edge");
    }
  }

  // One column of a transfer: updates the pair of heaps whose destination
  // is `j`. Distinct columns touch disjoint state, so the k columns of one
  // transfer may run concurrently (see parallel_index_update).
  void transfer_column(const TransferEdge& e, CenterId j) {
    if (j != e.from) heap_erase(e.from, j, e.demand);
    if (j != e.to) {
      heap_push(e.to, j, Entry{(*cm_)(e.demand, j) - (*cm_)(e.demand, e.to),
                               e.demand});
    }
  }

  // Completes a transfer after all columns ran: re-homes the demand and
  // moves it in the allotment.
  void transfer_finish(Allotment& allotment, const TransferEdge& e) {
    home_[static_cast<std::size_t>(e.demand)] = e.to;
    allotment.move(e.demand, e.to);
  }

  // Sequential reassignment of one demand unit: 2(k-1) heap updates plus
  // the allotment move.
  void apply_transfer(Allotment& allotment, const TransferEdge& e) {
    transfer_validate(allotment, e);
    for (CenterId j = 0; j < k_; ++j) transfer_column(e, j);
    transfer_finish(allotment, e);
  }

  Count heap_size(CenterId from, CenterId to) const {
    return static_cast<Count>(heaps_[heap_slot(from, to)].data.size());
  }

  // Sorted (cost, demand) snapshot of one heap, for consistency checks.
  std::vector<std::pair<Cost, DemandId>> heap_snapshot(CenterId from,
                                                       CenterId to) const {
    const auto& h = heaps_[heap_slot(from, to)];
    std::vector<std::pair<Cost, DemandId>> out;
    out.reserve(h.data.size());
    for (const auto& e : h.data) out.emplace_back(e.key, e.demand);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Entry {
    Cost key;
    DemandId demand;
  };

  struct Heap {
    std::vector<Entry> data;
  };

  static bool entry_less(const Entry& a, const Entry& b) {
    return a.key < b.key || (a.key == b.key && a.demand < b.demand);
  }

  std::size_t heap_slot(CenterId from, CenterId to) const {
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(k_) +
           static_cast<std::size_t>(to);
  }

  std::int32_t& pos_slot(DemandId d, CenterId j) {
    return pos_[static_cast<std::size_t>(d) * static_cast<std::size_t>(k_) +
                static_cast<std::size_t>(j)];
  }

  void heap_push(CenterId from, CenterId to, Entry e) {
    auto& h = heaps_[heap_slot(from, to)];
    h.data.push_back(e);
    const auto idx = static_cast<std::int32_t>(h.data.size() - 1);
    pos_slot(e.demand, to) = idx;
    sift_up(h, to, idx);
  }

  void heap_erase(CenterId from, CenterId to, DemandId d) {
    auto& h = heaps_[heap_slot(from, to)];
    const std::int32_t idx = pos_slot(d, to);
    if (idx < 0 || static_cast<std::size_t>(idx) >= h.data.size() ||
        h.data[static_cast<std::size_t>(idx)].demand != d) {
      throw std::logic_error("lbdd: heap handle out of sync");
    }
    const auto last = static_cast<std::int32_t>(h.data.size() - 1);
    pos_slot(d, to) = -1;
    if (idx != last) {
      h.data[static_cast<std::size_t>(idx)] = h.data[static_cast<std::size_t>(last)];
      pos_slot(h.data[static_cast<std::size_t>(idx)].demand, to) = idx;
      h.data.pop_back();
      sift_down(h, to, idx);
      sift_up(h, to, idx);
    } else {
      h.data.pop_back();
    }
  }

  void sift_up(Heap& h, CenterId to, std::int32_t idx) {
    while (idx > 0) {
      const std::int32_t parent = (idx - 1) / 2;
      if (!entry_less(h.data[static_cast<std::size_t>(idx)],
                      h.data[static_cast<std::size_t>(parent)])) {
        break;
      }
      swap_entries(h, to, idx, parent);
      idx = parent;
    }
  }

  void sift_down(Heap& h, CenterId to, std::int32_t idx) {
    const auto size = static_cast<std::int32_t>(h.data.size());
    while (true) {
      std::int32_t smallest = idx;
      const std::int32_t left = 2 * idx + 1;
      const std::int32_t right = 2 * idx + 2;
      if (left < size && entry_less(h.data[static_cast<std::size_t>(left)],
                                    h.data[static_cast<std::size_t>(smallest)])) {
        smallest = left;
      }
      if (right < size && entry_less(h.data[static_cast<std::size_t>(right)],
                                     h.data[static_cast<std::size_t>(smallest)])) {
        smallest = right;
      }
      if (smallest == idx) break;
      swap_entries(h, to, idx, smallest);
      idx = smallest;
    }
  }

  void swap_entries(Heap& h, CenterId to, std::int32_t a, std::int32_t b) {
    std::swap(h.data[static_cast<std::size_t>(a)], h.data[static_cast<std::size_t>(b)]);
    pos_slot(h.data[static_cast<std::size_t>(a)].demand, to) = a;
    pos_slot(h.data[static_cast<std::size_t>(b)].demand, to) = b;
  }

  Count k_;
  Count n_;
  const CostMatrix* cm_;
  std::vector<Heap> heaps_;        // slot (from, to) at from*k + to
  std::vector<std::int32_t> pos_;  // position of d in heap(home(d), j)
  std::vector<CenterId> home_;
};

inline SubspaceIndex build_index(const ProblemInstance& instance,
                                 const Allotment& allotment) {
  SubspaceIndex index(instance);
  for (DemandId d = 0; d < instance.n(); ++d) {
    const CenterId s = allotment.assignment[static_cast<std::size_t>(d)];
    if (s != kUnassigned) index.insert(d, s);
  }
  return index;
}

enum class AuxEdgeKind : std::uint8_t {
  transfer,  // moves a real demand unit, payload in `demand`
  dummy,     // moves a surplus-capacity placeholder (strict mode), cost 0
  penalty,   // closing penalty-difference edge of a path graph
};

struct AuxEdge {
  std::int32_t from = -1;  // graph node ids, not center ids
  std::int32_t to = -1;
  AuxEdgeKind kind = AuxEdgeKind::transfer;
  DemandId demand = -1;
  Cost cost = 0;
};

// Anchored graph over k+1 nodes: every non-anchor center keeps its id, the
// anchor's slot acts as anchor-out, and node k is anchor-in. At most one
// edge per ordered node pair (the cheapest parallel transfer).
struct AuxGraph {
  CenterId anchor = 0;
  std::int32_t node_count = 0;
  std::vector<AuxEdge> edges;
  // Incoming edge ids per node, sorted by source node id; drives the
  // deterministic parent tie rule during relaxation.
  std::vector<std::vector<std::int32_t>> in_edges;

  std::int32_t anchor_out() const { return anchor; }
  std::int32_t anchor_in() const { return node_count - 1; }

  CenterId node_center(std::int32_t node) const {
    return node == node_count - 1 ? anchor : static_cast<CenterId>(node);
  }

  void add_edge(AuxEdge e) { edges.push_back(e); }

  void finalize() {
    in_edges.assign(static_cast<std::size_t>(node_count), {});
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(edges.size()); ++i) {
      in_edges[static_cast<std::size_t>(edges[static_cast<std::size_t>(i)].to)]
          .push_back(i);
    }
    for (auto& ids : in_edges) {
      std::sort(ids.begin(), ids.end(), [this](std::int32_t a, std::int32_t b) {
        return edges[static_cast<std::size_t>(a)].from <
               edges[static_cast<std::size_t>(b)].from;
      });
    }
  }
};

// Cheapest u->v edge considering both the real transfer heap and, when a
// surplus placeholder sits at u, a zero-cost placeholder move.
inline std::optional<AuxEdge> cheapest_pair_edge(const SubspaceIndex& index,
                                                 CenterId u, CenterId v,
                                                 const std::vector<Count>* dummies) {
  const auto real = index.min_transfer(u, v);
  const bool dummy_ok =
      dummies != nullptr && (*dummies)[static_cast<std::size_t>(u)] > 0;
  if (dummy_ok && (!real || real->cost >= 0)) {
    return AuxEdge{u, v, AuxEdgeKind::dummy, -1, 0};
  }
  if (real) {
    return AuxEdge{u, v, AuxEdgeKind::transfer, real->demand, real->cost};
  }
  return std::nullopt;
}

// Anchored cycle-search graph: a lowest-cost anchor-out -> anchor-in path
// is the most negative transfer cycle through the anchor. Pairs with no
// transferable demand get no edge. `dummies`, when given, contributes
// zero-cost placeholder edges out of centers with surplus capacity.
inline AuxGraph build_negcycle_graph(const SubspaceIndex& index, CenterId anchor,
                                     const std::vector<Count>* dummies = nullptr) {
  const Count k = index.center_count();
  AuxGraph g;
  g.anchor = anchor;
  g.node_count = static_cast<std::int32_t>(k + 1);
  for (CenterId u = 0; u < k; ++u) {
    for (CenterId v = 0; v < k; ++v) {
      if (u == v) continue;
      auto e = cheapest_pair_edge(index, u, v, dummies);
      if (!e) continue;
      e->from = u;  // anchor slot doubles as anchor-out
      e->to = (v == anchor) ? g.anchor_in() : v;
      g.add_edge(*e);
    }
  }
  g.finalize();
  return g;
}

// Anchored path-search graph for an overloaded anchor: transfer edges as in
// the cycle graph except that every edge into anchor-in is a penalty-
// difference edge (gain of migrating one overload unit from the anchor to
// that center).
inline AuxGraph build_negpath_graph(const SubspaceIndex& index,
                                    const Allotment& allotment,
                                    const ProblemInstance& instance,
                                    CenterId anchor) {
  const Count k = index.center_count();
  const auto& anchor_center = instance.centers[static_cast<std::size_t>(anchor)];
  const Count anchor_load = allotment.load[static_cast<std::size_t>(anchor)];
  if (anchor_load <= anchor_center.capacity) {
    throw std::logic_error("lbdd: path graph requires an overloaded anchor");
  }
  const Cost anchor_refund = refund_penalty(anchor_center, anchor_load);

  AuxGraph g;
  g.anchor = anchor;
  g.node_count = static_cast<std::int32_t>(k + 1);
  for (CenterId u = 0; u < k; ++u) {
    for (CenterId v = 0; v < k; ++v) {
      if (u == v || v == anchor) continue;
      auto e = cheapest_pair_edge(index, u, v, nullptr);
      if (!e) continue;
      e->from = u;
      e->to = v;
      g.add_edge(*e);
    }
    if (u != anchor) {
      const Cost gain =
          marginal_penalty(instance.centers[static_cast<std::size_t>(u)],
                           allotment.load[static_cast<std::size_t>(u)]) -
          anchor_refund;
      g.add_edge(AuxEdge{u, g.anchor_in(), AuxEdgeKind::penalty, -1, gain});
    }
  }
  g.finalize();
  return g;
}

}  // namespace lbdd
