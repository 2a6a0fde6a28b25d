#pragma once

// Task set, dependency DAG and weights of the tiled Cholesky factorization
// on a t-by-t tile matrix. Four kernel kinds: POTRF (C), TRSM (T), SYRK (S),
// GEMM (G). Weights are integer ticks: 1, 3, 3, 6.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace cholsched {

enum class Kind : std::uint8_t { Potrf = 0, Trsm = 1, Syrk = 2, Gemm = 3 };

constexpr int kind_weight(Kind kind) {
  switch (kind) {
  case Kind::Potrf:
    return 1;
  case Kind::Trsm:
  case Kind::Syrk:
    return 3;
  case Kind::Gemm:
    return 6;
  }
  return 0;
}

constexpr const char* kind_name(Kind kind) {
  switch (kind) {
  case Kind::Potrf:
    return "POTRF";
  case Kind::Trsm:
    return "TRSM";
  case Kind::Syrk:
    return "SYRK";
  case Kind::Gemm:
    return "GEMM";
  }
  return "?";
}

constexpr char kind_letter(Kind kind) {
  switch (kind) {
  case Kind::Potrf:
    return 'C';
  case Kind::Trsm:
    return 'T';
  case Kind::Syrk:
    return 'S';
  case Kind::Gemm:
    return 'G';
  }
  return '?';
}

// One elementary task. Indices are 1-based; unused indices are zero.
// The default comparison (kind, i, j, k) is the global tie-breaking order
// used everywhere (Potrf < Trsm < Syrk < Gemm).
struct TaskId {
  Kind kind{Kind::Potrf};
  int i{0};
  int j{0};
  int k{0};

  static TaskId potrf(int i) { return {Kind::Potrf, i, 0, 0}; }
  static TaskId trsm(int i, int j) { return {Kind::Trsm, i, j, 0}; }
  static TaskId syrk(int i, int j) { return {Kind::Syrk, i, j, 0}; }
  static TaskId gemm(int i, int j, int k) { return {Kind::Gemm, i, j, k}; }

  auto operator<=>(const TaskId&) const = default;
};

inline int task_weight(const TaskId& task) { return kind_weight(task.kind); }

inline bool valid_task(const TaskId& task, int t) {
  switch (task.kind) {
  case Kind::Potrf:
    return 1 <= task.i && task.i <= t && task.j == 0 && task.k == 0;
  case Kind::Trsm:
  case Kind::Syrk:
    return 1 <= task.j && task.j < task.i && task.i <= t && task.k == 0;
  case Kind::Gemm:
    return 1 <= task.k && task.k < task.j && task.j < task.i && task.i <= t;
  }
  return false;
}

inline std::string to_string(const TaskId& task) {
  std::string s(1, kind_letter(task.kind));
  s += std::to_string(task.i);
  if (task.kind != Kind::Potrf) {
    s += ',';
    s += std::to_string(task.j);
  }
  if (task.kind == Kind::Gemm) {
    s += ',';
    s += std::to_string(task.k);
  }
  return s;
}

struct CountsByKind {
  std::int64_t potrf{0};
  std::int64_t trsm{0};
  std::int64_t syrk{0};
  std::int64_t gemm{0};

  std::int64_t total() const { return potrf + trsm + syrk + gemm; }
  bool operator==(const CountsByKind&) const = default;
};

inline void check_tile_count(int t) {
  if (t < 1) throw std::domain_error("tile count must be >= 1");
}

inline CountsByKind task_counts(int t) {
  check_tile_count(t);
  const std::int64_t tt = t;
  // t^3/6 - t^2/2 + t/3 = t(t-1)(t-2)/6, an integer for every t.
  return {tt, tt * (tt - 1) / 2, tt * (tt - 1) / 2, tt * (tt - 1) * (tt - 2) / 6};
}

// Dependency DAG. Tasks are kept sorted in TaskId order; successor lists
// hold indices into `tasks` and are sorted as well.
struct TaskGraph {
  int t{0};
  std::vector<TaskId> tasks;
  std::vector<std::vector<std::int32_t>> successors;
  std::vector<int> weights;

  std::size_t size() const { return tasks.size(); }

  std::int32_t index_of(const TaskId& task) const {
    auto it = std::lower_bound(tasks.begin(), tasks.end(), task);
    if (it == tasks.end() || *it != task) return -1;
    return static_cast<std::int32_t>(it - tasks.begin());
  }

  std::int64_t edge_count() const {
    std::int64_t n = 0;
    for (const auto& succ : successors) n += static_cast<std::int64_t>(succ.size());
    return n;
  }

  std::vector<std::vector<std::int32_t>> predecessors() const {
    std::vector<std::vector<std::int32_t>> preds(tasks.size());
    for (std::size_t u = 0; u < tasks.size(); ++u)
      for (std::int32_t v : successors[u]) preds[v].push_back(static_cast<std::int32_t>(u));
    for (auto& pr : preds) std::sort(pr.begin(), pr.end());
    return preds;
  }

  // Kahn's algorithm; smallest task index first. Throws if a cycle exists.
  std::vector<std::int32_t> topological_order() const {
    std::vector<int> indegree(tasks.size(), 0);
    for (const auto& succ : successors)
      for (std::int32_t v : succ) ++indegree[v];
    std::priority_queue<std::int32_t, std::vector<std::int32_t>, std::greater<>> ready;
    for (std::size_t u = 0; u < tasks.size(); ++u)
      if (indegree[u] == 0) ready.push(static_cast<std::int32_t>(u));
    std::vector<std::int32_t> order;
    order.reserve(tasks.size());
    while (!ready.empty()) {
      std::int32_t u = ready.top();
      ready.pop();
      order.push_back(u);
      for (std::int32_t v : successors[u])
        if (--indegree[v] == 0) ready.push(v);
    }
    if (order.size() != tasks.size()) throw std::runtime_error("task graph has a cycle");
    return order;
  }
};

inline std::int64_t total_work(int t) {
  check_tile_count(t);
  return static_cast<std::int64_t>(t) * t * t;
}

inline TaskGraph build_graph(int t) {
  check_tile_count(t);
  TaskGraph g;
  g.t = t;

  for (int i = 1; i <= t; ++i) g.tasks.push_back(TaskId::potrf(i));
  for (int i = 2; i <= t; ++i)
    for (int j = 1; j < i; ++j) g.tasks.push_back(TaskId::trsm(i, j));
  for (int i = 2; i <= t; ++i)
    for (int j = 1; j < i; ++j) g.tasks.push_back(TaskId::syrk(i, j));
  for (int i = 3; i <= t; ++i)
    for (int j = 2; j < i; ++j)
      for (int k = 1; k < j; ++k) g.tasks.push_back(TaskId::gemm(i, j, k));
  std::sort(g.tasks.begin(), g.tasks.end());

  g.weights.reserve(g.tasks.size());
  for (const auto& task : g.tasks) g.weights.push_back(task_weight(task));

  g.successors.assign(g.tasks.size(), {});
  auto add_edge = [&g](const TaskId& from, const TaskId& to) {
    std::int32_t u = g.index_of(from);
    std::int32_t v = g.index_of(to);
    g.successors[u].push_back(v);
  };

  // The eight dependency rules.
  for (int j = 1; j <= t; ++j)
    for (int i = j + 1; i <= t; ++i) add_edge(TaskId::potrf(j), TaskId::trsm(i, j));
  for (int i = 2; i <= t; ++i)
    for (int j = 1; j < i; ++j) add_edge(TaskId::trsm(i, j), TaskId::syrk(i, j));
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j < i; ++j)
      for (int k = j + 1; k < i; ++k) add_edge(TaskId::trsm(i, j), TaskId::gemm(i, k, j));
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j < i; ++j)
      for (int k = i + 1; k <= t; ++k) add_edge(TaskId::trsm(i, j), TaskId::gemm(k, i, j));
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j + 1 < i; ++j) add_edge(TaskId::syrk(i, j), TaskId::syrk(i, j + 1));
  for (int i = 2; i <= t; ++i) add_edge(TaskId::syrk(i, i - 1), TaskId::potrf(i));
  for (int i = 1; i <= t; ++i)
    for (int j = 2; j < i; ++j) add_edge(TaskId::gemm(i, j, j - 1), TaskId::trsm(i, j));
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j < i; ++j)
      for (int k = 1; k + 1 < j; ++k) add_edge(TaskId::gemm(i, j, k), TaskId::gemm(i, j, k + 1));

  for (auto& succ : g.successors) std::sort(succ.begin(), succ.end());
  return g;
}

// Same tasks, edges flipped.
inline TaskGraph reverse_graph(const TaskGraph& g) {
  TaskGraph r;
  r.t = g.t;
  r.tasks = g.tasks;
  r.weights = g.weights;
  r.successors = g.predecessors();
  return r;
}

} // namespace cholsched
