// Deterministic shared-memory parallelism for the two profiled hot spots:
// the synchronous relaxation round inside lowest-cost-path search and the
// 2(k-1) transfer-heap updates of a single reassignment. Both are
// fork-join phases over disjoint partitions, so any worker count yields
// bit-identical results to the sequential engine.
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "lbdd/core.hpp"
#include "lbdd/subspace.hpp"

namespace lbdd {

struct ParallelConfig {
  int workers = 1;
  // Approximate edges per relaxation task; small graphs collapse to one task.
  std::int64_t chunking = 256;
  bool relax_phase = true;         // parallelize lowest-cost-path rounds
  bool index_update_phase = true;  // parallelize transfer-heap updates
};

// Fork-join pool. run() dispatches task indices [0, count) across the
// workers and returns after all complete; the calling thread participates.
class WorkerPool {
 public:
  explicit WorkerPool(int workers) : requested_(workers < 1 ? 1 : workers) {
    for (int i = 0; i + 1 < requested_; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    wake_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  int workers() const { return requested_; }

  void run(std::size_t task_count, const std::function<void(std::size_t)>& fn) {
    if (task_count == 0) return;
    if (requested_ == 1 || task_count == 1) {
      for (std::size_t i = 0; i < task_count; ++i) fn(i);
      return;
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      fn_ = &fn;
      task_count_ = task_count;
      next_.store(0, std::memory_order_relaxed);
      remaining_.store(task_count, std::memory_order_relaxed);
      ++generation_;
    }
    wake_cv_.notify_all();
    drain();
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [this] {
      return remaining_.load(std::memory_order_acquire) == 0;
    });
    if (error_) {
      auto err = error_;
      error_ = nullptr;
      std::rethrow_exception(err);
    }
  }

 private:
  void drain() {
    while (true) {
      const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= task_count_) break;
      try {
        (*fn_)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!error_) error_ = std::current_exception();
      }
      if (remaining_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        done_cv_.notify_all();
      }
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    while (true) {
      {
        std::unique_lock<std::mutex> lock(mutex_);
        wake_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
    }
  }

  const int requested_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::size_t task_count_ = 0;
  std::atomic<std::size_t> next_{0};
  std::atomic<std::size_t> remaining_{0};
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

// Execution policy handle threaded through the solvers. A null pool means
// fully sequential execution; workers = 1 reproduces it exactly.
struct Engine {
  ParallelConfig config;
  WorkerPool* pool = nullptr;

  bool relax_parallel() const {
    return pool != nullptr && config.relax_phase && pool->workers() > 1;
  }
  bool index_parallel() const {
    return pool != nullptr && config.index_update_phase && pool->workers() > 1;
  }
};

namespace detail {

inline constexpr Cost kUnreachable = std::numeric_limits<Cost>::max() / 4;

// dist_out[v] = min(dist_in[v], min over in-edges (u,v) of dist_in[u]+cost),
// parent = the improving edge with the smallest source id. Pure function of
// dist_in, so the node partitioning cannot affect the result.
inline bool relax_nodes(const AuxGraph& g, const std::vector<Cost>& dist_in,
                        const std::vector<std::int32_t>& parent_in,
                        std::vector<Cost>& dist_out,
                        std::vector<std::int32_t>& parent_out,
                        std::int32_t begin, std::int32_t end) {
  bool changed = false;
  for (std::int32_t v = begin; v < end; ++v) {
    Cost best = dist_in[static_cast<std::size_t>(v)];
    std::int32_t best_edge = parent_in[static_cast<std::size_t>(v)];
    for (const std::int32_t ei : g.in_edges[static_cast<std::size_t>(v)]) {
      const auto& e = g.edges[static_cast<std::size_t>(ei)];
      const Cost du = dist_in[static_cast<std::size_t>(e.from)];
      if (du >= kUnreachable) continue;
      const Cost cand = du + e.cost;
      if (cand < best) {
        best = cand;
        best_edge = ei;
      }
    }
    dist_out[static_cast<std::size_t>(v)] = best;
    parent_out[static_cast<std::size_t>(v)] = best_edge;
    if (best != dist_in[static_cast<std::size_t>(v)]) changed = true;
  }
  return changed;
}

}  // namespace detail

// One synchronous (double-buffered) relaxation round. Returns whether any
// distance improved. Identical output for any worker count.
inline bool parallel_relax_round(const AuxGraph& g,
                                 const std::vector<Cost>& dist_in,
                                 const std::vector<std::int32_t>& parent_in,
                                 std::vector<Cost>& dist_out,
                                 std::vector<std::int32_t>& parent_out,
                                 const Engine& engine) {
  const auto nodes = static_cast<std::int32_t>(g.node_count);
  if (!engine.relax_parallel() ||
      static_cast<std::int64_t>(g.edges.size()) <= engine.config.chunking) {
    return detail::relax_nodes(g, dist_in, parent_in, dist_out, parent_out, 0,
                               nodes);
  }

  // Split nodes into tasks of roughly `chunking` incoming edges each.
  std::vector<std::int32_t> bounds{0};
  std::int64_t acc = 0;
  for (std::int32_t v = 0; v < nodes; ++v) {
    acc += static_cast<std::int64_t>(g.in_edges[static_cast<std::size_t>(v)].size());
    if (acc >= engine.config.chunking && v + 1 < nodes) {
      bounds.push_back(v + 1);
      acc = 0;
    }
  }
  bounds.push_back(nodes);

  std::vector<std::uint8_t> task_changed(bounds.size() - 1, 0);
  engine.pool->run(bounds.size() - 1, [&](std::size_t t) {
    task_changed[t] = detail::relax_nodes(g, dist_in, parent_in, dist_out,
                                          parent_out, bounds[t], bounds[t + 1])
                          ? 1
                          : 0;
  });
  bool changed = false;
  for (const auto c : task_changed) changed |= (c != 0);
  return changed;
}

// Applies one transfer with the heap updates fanned out over the pool.
// Tasks partition by destination column, so every heap (and every handle
// slot) is touched by exactly one task; the final index state matches the
// sequential apply_transfer exactly.
inline void parallel_index_update(SubspaceIndex& index, Allotment& allotment,
                                  const TransferEdge& e, const Engine& engine) {
  index.transfer_validate(allotment, e);
  const auto k = static_cast<std::size_t>(index.center_count());
  if (!engine.index_parallel() || k < 2) {
    for (CenterId j = 0; j < static_cast<CenterId>(k); ++j) {
      index.transfer_column(e, j);
    }
  } else {
    const std::size_t tasks =
        std::min<std::size_t>(static_cast<std::size_t>(engine.pool->workers()), k);
    const std::size_t per_task = (k + tasks - 1) / tasks;
    engine.pool->run(tasks, [&](std::size_t t) {
      const std::size_t begin = t * per_task;
      const std::size_t end = std::min(k, begin + per_task);
      for (std::size_t j = begin; j < end; ++j) {
        index.transfer_column(e, static_cast<CenterId>(j));
      }
    });
  }
  index.transfer_finish(allotment, e);
}

}  // namespace lbdd
