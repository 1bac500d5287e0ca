// Seeded synthetic instances at two levels of realism: points in the unit
// square with scaled euclidean costs, or a connected random geometric
// graph with shortest-path costs between demand and center vertices.
// Center count follows the n:k ratio, total capacity is theta * n split
// multinomially, and penalties are constants drawn from a range. All
// sampling uses explicit helpers over a fixed-width engine, so equal seeds
// give byte-identical instances on any platform.
#pragma once

#include <cmath>
#include <random>

#include "lbdd/core.hpp"

namespace lbdd {

struct WeightedGraph {
  struct Edge {
    std::int32_t u;
    std::int32_t v;
    Cost w;
  };
  Count node_count = 0;
  std::vector<Edge> edges;
};

struct RoadGraphSpec {
  Count nodes = 0;  // 0: one vertex per demand unit plus one per center
  double avg_degree = 4.0;
};

struct GenConfig {
  enum class CostSource { euclidean, road_graph };

  std::uint64_t seed = 1;
  Count n = 100;
  double ratio = 10.0;  // demand units per service center (n:k)
  double theta = 0.7;   // total capacity as a fraction of n
  std::pair<Cost, Cost> penalty_range{1, 200};
  CostSource cost_source = CostSource::euclidean;
  RoadGraphSpec road;
  bool for_strict = false;  // reject configs with zero total capacity
};

inline Count derive_center_count(Count n, double ratio) {
  if (ratio <= 0) throw std::invalid_argument("lbdd: ratio must be positive");
  const auto k = static_cast<Count>(
      std::floor(static_cast<double>(n) / ratio));
  return k < 1 ? 1 : k;
}

namespace gen_detail {

// Unbiased bounded draw (multiply-shift rejection); avoids the
// implementation-defined std distributions so that seeds reproduce
// everywhere.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::logic_error("lbdd: empty sample range");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    const auto m = static_cast<unsigned __int128>(rng()) * bound;
    if (static_cast<std::uint64_t>(m) >= threshold) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo,
                                std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(
                  rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Point {
  double x;
  double y;
};

inline double dist(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline Cost scaled_cost(double d) {
  const auto c = static_cast<Cost>(std::llround(d * 1000.0));
  return c < 1 ? 1 : c;
}

// k distinct indices below `universe`, by partial Fisher-Yates.
inline std::vector<std::int32_t> sample_distinct(std::mt19937_64& rng,
                                                 Count universe, Count count) {
  std::vector<std::int32_t> pool(static_cast<std::size_t>(universe));
  for (Count i = 0; i < universe; ++i) {
    pool[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
  }
  for (Count i = 0; i < count; ++i) {
    const auto j = i + static_cast<Count>(uniform_below(
                           rng, static_cast<std::uint64_t>(universe - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

struct DisjointSets {
  std::vector<std::int32_t> parent;
  explicit DisjointSets(Count n) : parent(static_cast<std::size_t>(n)) {
    for (std::size_t i = 0; i < parent.size(); ++i) {
      parent[i] = static_cast<std::int32_t>(i);
    }
  }
  std::int32_t find(std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

// Random geometric graph: each vertex links to its nearest neighbors, then
// the closest cross-component pairs are bridged until connected.
inline WeightedGraph random_road_graph(std::mt19937_64& rng, Count nodes,
                                       double avg_degree,
                                       std::vector<Point>* points_out) {
  WeightedGraph g;
  g.node_count = nodes;
  std::vector<Point> pts(static_cast<std::size_t>(nodes));
  for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};

  const auto neighbors = static_cast<Count>(
      std::max(1.0, std::round(avg_degree / 2.0)));
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  std::vector<std::pair<double, std::int32_t>> order;
  for (Count i = 0; i < nodes; ++i) {
    order.clear();
    for (Count j = 0; j < nodes; ++j) {
      if (j == i) continue;
      order.emplace_back(dist(pts[static_cast<std::size_t>(i)],
                              pts[static_cast<std::size_t>(j)]),
                         static_cast<std::int32_t>(j));
    }
    const auto take = std::min<std::size_t>(order.size(),
                                            static_cast<std::size_t>(neighbors));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end());
    for (std::size_t t = 0; t < take; ++t) {
      const auto a = static_cast<std::int32_t>(i);
      const auto b = order[t].second;
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  DisjointSets sets(nodes);
  for (const auto& [u, v] : pairs) {
    g.edges.push_back({u, v,
                       scaled_cost(dist(pts[static_cast<std::size_t>(u)],
                                        pts[static_cast<std::size_t>(v)]))});
    sets.unite(u, v);
  }
  while (true) {
    double best = 0;
    std::int32_t bu = -1;
    std::int32_t bv = -1;
    for (Count i = 0; i < nodes; ++i) {
      for (Count j = i + 1; j < nodes; ++j) {
        const auto a = static_cast<std::int32_t>(i);
        const auto b = static_cast<std::int32_t>(j);
        if (sets.find(a) == sets.find(b)) continue;
        const double d = dist(pts[static_cast<std::size_t>(i)],
                              pts[static_cast<std::size_t>(j)]);
        if (bu < 0 || d < best) {
          best = d;
          bu = a;
          bv = b;
        }
      }
    }
    if (bu < 0) break;  // connected
    g.edges.push_back({bu, bv, scaled_cost(best)});
    sets.unite(bu, bv);
  }
  if (points_out) *points_out = std::move(pts);
  return g;
}

}  // namespace gen_detail

// Shortest-path cost matrix between demand vertices and center vertices,
// all-pairs over the full graph. Distances of zero (a demand sharing a
// center's vertex) clamp to 1 to keep costs positive.
inline CostMatrix apsp_costs(const WeightedGraph& graph,
                             const std::vector<std::int32_t>& centers,
                             const std::vector<std::int32_t>& demands) {
  const auto nodes = static_cast<std::size_t>(graph.node_count);
  const Cost inf = std::numeric_limits<Cost>::max() / 4;
  std::vector<std::vector<Cost>> dist(nodes, std::vector<Cost>(nodes, inf));
  for (std::size_t i = 0; i < nodes; ++i) dist[i][i] = 0;
  for (const auto& e : graph.edges) {
    auto& fwd = dist[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
    auto& bwd = dist[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)];
    fwd = std::min(fwd, e.w);
    bwd = std::min(bwd, e.w);
  }
  for (std::size_t via = 0; via < nodes; ++via) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const Cost dv = dist[i][via];
      if (dv >= inf) continue;
      for (std::size_t j = 0; j < nodes; ++j) {
        if (dist[via][j] >= inf) continue;
        const Cost through = dv + dist[via][j];
        if (through < dist[i][j]) dist[i][j] = through;
      }
    }
  }

  std::vector<Cost> costs;
  costs.reserve(demands.size() * centers.size());
  for (const auto dv : demands) {
    for (const auto cv : centers) {
      const Cost d = dist[static_cast<std::size_t>(dv)][static_cast<std::size_t>(cv)];
      if (d >= inf) {
        throw std::runtime_error("lbdd: disconnected graph");
      }
      costs.push_back(d < 1 ? 1 : d);
    }
  }
  return CostMatrix(static_cast<Count>(demands.size()),
                    static_cast<Count>(centers.size()), std::move(costs));
}

inline ProblemInstance generate(const GenConfig& config) {
  if (config.n < 1) throw std::invalid_argument("lbdd: n must be >= 1");
  if (config.theta <= 0.0 || config.theta > 1.0) {
    throw std::invalid_argument("lbdd: theta must be in (0, 1]");
  }
  if (config.penalty_range.first < 1 ||
      config.penalty_range.second < config.penalty_range.first) {
    throw std::invalid_argument("lbdd: bad penalty range");
  }
  const Count n = config.n;
  const Count k = derive_center_count(n, config.ratio);
  const auto total_capacity = static_cast<Count>(
      std::llround(config.theta * static_cast<double>(n)));
  if (config.for_strict && total_capacity == 0) {
    throw std::invalid_argument(
        "lbdd: strict runs need nonzero total capacity");
  }

  std::mt19937_64 rng(config.seed);
  ProblemInstance inst;
  inst.demand_count = n;

  std::vector<Count> capacities(static_cast<std::size_t>(k), 0);
  for (Count u = 0; u < total_capacity; ++u) {
    ++capacities[static_cast<std::size_t>(
        gen_detail::uniform_below(rng, static_cast<std::uint64_t>(k)))];
  }
  for (Count s = 0; s < k; ++s) {
    inst.centers.push_back(
        {static_cast<CenterId>(s), capacities[static_cast<std::size_t>(s)],
         PenaltySpec::constant(gen_detail::uniform_int(
             rng, config.penalty_range.first, config.penalty_range.second))});
  }

  if (config.cost_source == GenConfig::CostSource::euclidean) {
    std::vector<gen_detail::Point> center_pts(static_cast<std::size_t>(k));
    for (auto& p : center_pts) {
      p = {gen_detail::uniform01(rng), gen_detail::uniform01(rng)};
    }
    std::vector<Cost> costs;
    costs.reserve(static_cast<std::size_t>(n * k));
    for (Count d = 0; d < n; ++d) {
      const gen_detail::Point dp{gen_detail::uniform01(rng),
                                 gen_detail::uniform01(rng)};
      for (Count s = 0; s < k; ++s) {
        costs.push_back(gen_detail::scaled_cost(
            gen_detail::dist(dp, center_pts[static_cast<std::size_t>(s)])));
      }
    }
    inst.cost_matrix = CostMatrix(n, k, std::move(costs));
  } else {
    const Count nodes = config.road.nodes > 0 ? config.road.nodes : n + k;
    if (nodes < k) {
      throw std::invalid_argument("lbdd: graph too small for the centers");
    }
    const WeightedGraph graph = gen_detail::random_road_graph(
        rng, nodes, config.road.avg_degree, nullptr);
    const auto center_vertices = gen_detail::sample_distinct(rng, nodes, k);
    std::vector<bool> is_center(static_cast<std::size_t>(nodes), false);
    for (const auto v : center_vertices) {
      is_center[static_cast<std::size_t>(v)] = true;
    }
    std::vector<std::int32_t> rest;
    rest.reserve(static_cast<std::size_t>(nodes - k));
    for (Count v = 0; v < nodes; ++v) {
      if (!is_center[static_cast<std::size_t>(v)]) {
        rest.push_back(static_cast<std::int32_t>(v));
      }
    }
    std::vector<std::int32_t> demand_vertices;
    demand_vertices.reserve(static_cast<std::size_t>(n));
    if (rest.empty()) {
      throw std::invalid_argument("lbdd: no demand vertices left");
    }
    for (Count d = 0; d < n; ++d) {
      demand_vertices.push_back(
          rest[static_cast<std::size_t>(d) % rest.size()]);
    }
    inst.cost_matrix = apsp_costs(graph, center_vertices, demand_vertices);
  }
  return inst;
}

}  // namespace lbdd
