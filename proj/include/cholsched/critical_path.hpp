#pragma once

// Per-task critical paths: remaining longest weighted path including the
// task's own weight. Closed forms per kind, plus a longest-path computation
// over the DAG that serves as an independent route to the same values.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cholsched/task_graph.hpp"

namespace cholsched {

// Critical path of the whole instance: 9t-10 for t >= 2, 1 for the single
// POTRF of t = 1.
inline std::int64_t graph_critical_path(int t) {
  check_tile_count(t);
  if (t == 1) return 1;
  return 9LL * t - 10;
}

inline std::int64_t cp_closed_form(const TaskId& task, int t) {
  check_tile_count(t);
  if (!valid_task(task, t)) throw std::domain_error("invalid task for tile count");
  const std::int64_t i = task.i, j = task.j, k = task.k, tt = t;
  switch (task.kind) {
  case Kind::Potrf:
    return i == tt ? 1 : 9 * (tt - i) - 1;
  case Kind::Trsm:
    return 9 * (tt - j) - 2;
  case Kind::Syrk:
    return i == tt ? 3 * (tt - j) + 1 : 9 * tt - 6 * i - 3 * j - 1;
  case Kind::Gemm:
    return 9 * tt - 3 * j - 6 * k - 2;
  }
  throw std::domain_error("unknown task kind");
}

struct CpTable {
  int t{0};
  std::vector<std::int64_t> cp; // parallel to TaskGraph::tasks

  std::int64_t max() const {
    std::int64_t m = 0;
    for (std::int64_t v : cp) m = std::max(m, v);
    return m;
  }
};

// cp(X) = w(X) + max over successors Y of cp(Y), by dynamic programming over
// reverse topological order.
inline CpTable cp_longest_path(const TaskGraph& g) {
  CpTable table;
  table.t = g.t;
  table.cp.assign(g.size(), 0);
  const auto order = g.topological_order(); // throws on cycle
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::int32_t u = *it;
    std::int64_t best = 0;
    for (std::int32_t v : g.successors[u]) best = std::max(best, table.cp[v]);
    table.cp[u] = g.weights[u] + best;
  }
  return table;
}

} // namespace cholsched
