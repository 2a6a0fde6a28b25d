#pragma once

// Discrete-event simulation of schedules on p identical units, integer
// ticks, no preemption. Policies:
//   AlapList   — list scheduling on the edge-reversed graph, CP priority,
//                then time-mirrored back; the resource-limited ALAP.
//   AsapList   — forward list scheduling with CP priority.
//   ForkJoin   — bulk-synchronous per-step phases with barriers (LAPACK
//                style right-looking factorization).
//   KurzakRows — rows owned cyclically by units, fixed left-looking queue
//                per unit, no within-unit reordering.
// All tie-breaking is by the global TaskId order; unit selection is
// lowest-index-free. Every policy is deterministic given (t, p).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cholsched/critical_path.hpp"
#include "cholsched/intmath.hpp"
#include "cholsched/task_graph.hpp"

namespace cholsched {

enum class Policy { AlapList, AsapList, ForkJoin, KurzakRows };

constexpr const char* policy_name(Policy p) {
  switch (p) {
  case Policy::AlapList:
    return "alap";
  case Policy::AsapList:
    return "asap";
  case Policy::ForkJoin:
    return "forkjoin";
  case Policy::KurzakRows:
    return "kurzak";
  }
  return "?";
}

struct TraceEntry {
  TaskId task;
  std::int32_t unit{0};
  std::int64_t start{0};

  std::int64_t end() const { return start + task_weight(task); }
};

struct ScheduleTrace {
  int t{0};
  std::int64_t p{0};
  std::vector<TraceEntry> entries;
  std::int64_t makespan{0};
};

enum class Direction { Forward, Reversed };

namespace detail {

// Greedy forward list scheduling: whenever a unit is free and ready tasks
// exist, the ready task with the highest priority (ties by TaskId order)
// goes to the lowest-index free unit.
inline ScheduleTrace run_list_engine(const TaskGraph& g, std::int64_t p,
                                     std::span<const std::int64_t> priority) {
  if (p < 1) throw std::domain_error("p must be >= 1");
  const std::size_t n = g.size();
  std::vector<int> indegree(n, 0);
  for (const auto& succ : g.successors)
    for (std::int32_t v : succ) ++indegree[v];

  // Ready queue keyed (priority desc, task index asc); task index order is
  // the TaskId order.
  using ReadyKey = std::pair<std::int64_t, std::int32_t>;
  std::priority_queue<ReadyKey, std::vector<ReadyKey>, std::greater<>> ready;
  for (std::size_t u = 0; u < n; ++u)
    if (indegree[u] == 0) ready.push({-priority[u], static_cast<std::int32_t>(u)});

  std::priority_queue<std::int32_t, std::vector<std::int32_t>, std::greater<>> free_units;
  for (std::int64_t u = 0; u < p; ++u) free_units.push(static_cast<std::int32_t>(u));

  // (end, unit, task)
  using BusyKey = std::tuple<std::int64_t, std::int32_t, std::int32_t>;
  std::priority_queue<BusyKey, std::vector<BusyKey>, std::greater<>> busy;

  ScheduleTrace trace;
  trace.t = g.t;
  trace.p = p;
  trace.entries.reserve(n);

  std::int64_t now = 0;
  std::size_t done = 0;
  while (done < n) {
    while (!ready.empty() && !free_units.empty()) {
      const auto [negprio, u] = ready.top();
      ready.pop();
      const std::int32_t unit = free_units.top();
      free_units.pop();
      trace.entries.push_back({g.tasks[u], unit, now});
      busy.push({now + g.weights[u], unit, u});
    }
    if (busy.empty()) throw std::runtime_error("list engine stalled: graph has a cycle");
    const std::int64_t event = std::get<0>(busy.top());
    while (!busy.empty() && std::get<0>(busy.top()) == event) {
      const auto [end, unit, u] = busy.top();
      busy.pop();
      free_units.push(unit);
      ++done;
      for (std::int32_t v : g.successors[u])
        if (--indegree[v] == 0) ready.push({-priority[v], v});
    }
    now = event;
    trace.makespan = std::max(trace.makespan, event);
  }
  return trace;
}

} // namespace detail

// Forward: CP-priority ASAP list scheduling. Reversed: the same engine on
// the edge-reversed graph (priority = cp there), with all start times
// mirrored into a forward trace afterwards.
inline ScheduleTrace simulate_list(const TaskGraph& g, std::int64_t p, Direction dir) {
  if (dir == Direction::Forward) {
    const CpTable cp = cp_longest_path(g);
    return detail::run_list_engine(g, p, cp.cp);
  }
  const TaskGraph rg = reverse_graph(g);
  const CpTable cp = cp_longest_path(rg);
  ScheduleTrace trace = detail::run_list_engine(rg, p, cp.cp);
  for (auto& e : trace.entries) e.start = trace.makespan - (e.start + task_weight(e.task));
  std::sort(trace.entries.begin(), trace.entries.end(),
            [](const TraceEntry& a, const TraceEntry& b) {
              return std::tie(a.start, a.unit) < std::tie(b.start, b.unit);
            });
  return trace;
}

namespace detail {

// Greedy longest-weight-first packing of one phase onto p units; tasks must
// already be sorted by (weight desc, TaskId asc). Returns the phase span.
inline std::int64_t pack_phase(const std::vector<TaskId>& tasks, std::int64_t p,
                               std::int64_t phase_start, std::vector<TraceEntry>& out) {
  using UnitKey = std::pair<std::int64_t, std::int32_t>; // (load, unit)
  std::priority_queue<UnitKey, std::vector<UnitKey>, std::greater<>> units;
  const std::int64_t nunits = std::min<std::int64_t>(p, static_cast<std::int64_t>(tasks.size()));
  for (std::int64_t u = 0; u < std::max<std::int64_t>(nunits, 1); ++u)
    units.push({0, static_cast<std::int32_t>(u)});
  std::int64_t span = 0;
  for (const TaskId& task : tasks) {
    auto [load, unit] = units.top();
    units.pop();
    out.push_back({task, unit, phase_start + load});
    load += task_weight(task);
    span = std::max(span, load);
    units.push({load, unit});
  }
  return span;
}

} // namespace detail

// Bulk-synchronous fork-join: per step k, the POTRF alone, then the step's
// TRSMs, then its SYRKs+GEMMs, with a barrier between phases.
inline ScheduleTrace simulate_forkjoin(int t, std::int64_t p) {
  check_tile_count(t);
  if (p < 1) throw std::domain_error("p must be >= 1");
  ScheduleTrace trace;
  trace.t = t;
  trace.p = p;
  std::int64_t now = 0;
  for (int k = 1; k <= t; ++k) {
    trace.entries.push_back({TaskId::potrf(k), 0, now});
    now += 1;

    std::vector<TaskId> trsms;
    for (int i = k + 1; i <= t; ++i) trsms.push_back(TaskId::trsm(i, k));
    if (!trsms.empty()) now += detail::pack_phase(trsms, p, now, trace.entries);

    std::vector<TaskId> updates;
    for (int i = k + 1; i <= t; ++i)
      for (int j = k + 1; j < i; ++j) updates.push_back(TaskId::gemm(i, j, k));
    for (int i = k + 1; i <= t; ++i) updates.push_back(TaskId::syrk(i, k));
    if (!updates.empty()) now += detail::pack_phase(updates, p, now, trace.entries);
  }
  trace.makespan = now;
  return trace;
}

namespace detail {

// Left-looking order of the tasks of row i: for each j ascending, the
// GEMMs G_{i,j,*}, then T_{i,j}, then S_{i,j}; the POTRF C_i last. Every
// dependency points to an earlier row or earlier in the same row.
inline void append_row_tasks(int i, std::vector<TaskId>& out) {
  for (int j = 1; j < i; ++j) {
    for (int k = 1; k < j; ++k) out.push_back(TaskId::gemm(i, j, k));
    out.push_back(TaskId::trsm(i, j));
    out.push_back(TaskId::syrk(i, j));
  }
  out.push_back(TaskId::potrf(i));
}

} // namespace detail

// Row r is owned by unit (r-1) mod p; each unit runs its queue in order,
// starting a task as soon as its dependencies are complete and the unit is
// free (head-of-line, no reordering).
inline ScheduleTrace simulate_kurzak(int t, std::int64_t p) {
  check_tile_count(t);
  if (p < 1) throw std::domain_error("p must be >= 1");
  const TaskGraph g = build_graph(t);
  const auto preds = g.predecessors();

  ScheduleTrace trace;
  trace.t = t;
  trace.p = p;
  std::vector<std::int64_t> end_of(g.size(), 0);
  std::vector<std::int64_t> unit_free(static_cast<std::size_t>(std::min<std::int64_t>(p, t)), 0);

  std::vector<TaskId> order;
  order.reserve(g.size());
  for (int i = 1; i <= t; ++i) detail::append_row_tasks(i, order);

  for (const TaskId& task : order) {
    const std::int32_t u = g.index_of(task);
    const std::int32_t unit = static_cast<std::int32_t>((task.i - 1) % p);
    std::int64_t start = unit_free[static_cast<std::size_t>(unit)];
    for (std::int32_t q : preds[u]) start = std::max(start, end_of[q]);
    const std::int64_t end = start + g.weights[u];
    trace.entries.push_back({task, unit, start});
    end_of[u] = end;
    unit_free[static_cast<std::size_t>(unit)] = end;
    trace.makespan = std::max(trace.makespan, end);
  }
  return trace;
}

inline ScheduleTrace simulate(const TaskGraph& g, std::int64_t p, Policy policy) {
  switch (policy) {
  case Policy::AlapList:
    return simulate_list(g, p, Direction::Reversed);
  case Policy::AsapList:
    return simulate_list(g, p, Direction::Forward);
  case Policy::ForkJoin:
    return simulate_forkjoin(g.t, p);
  case Policy::KurzakRows:
    return simulate_kurzak(g.t, p);
  }
  throw std::domain_error("unknown policy");
}

struct Violation {
  enum class Type { MissingTask, DuplicateTask, UnknownTask, BadUnit, Overlap, Precedence };
  Type type;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::int64_t count(Violation::Type type) const {
    std::int64_t n = 0;
    for (const auto& v : violations)
      if (v.type == type) ++n;
    return n;
  }
};

inline ValidationReport validate(const ScheduleTrace& trace, const TaskGraph& g, std::int64_t p) {
  ValidationReport report;
  std::vector<int> seen(g.size(), 0);
  std::vector<std::int64_t> start_of(g.size(), -1);

  for (const auto& e : trace.entries) {
    const std::int32_t u = g.index_of(e.task);
    if (u < 0) {
      report.violations.push_back({Violation::Type::UnknownTask, to_string(e.task)});
      continue;
    }
    if (++seen[u] > 1)
      report.violations.push_back({Violation::Type::DuplicateTask, to_string(e.task)});
    else
      start_of[u] = e.start;
    if (e.unit < 0 || e.unit >= p)
      report.violations.push_back(
          {Violation::Type::BadUnit, to_string(e.task) + " on unit " + std::to_string(e.unit)});
  }
  for (std::size_t u = 0; u < g.size(); ++u)
    if (seen[u] == 0)
      report.violations.push_back({Violation::Type::MissingTask, to_string(g.tasks[u])});

  // Per-unit overlap.
  std::vector<std::vector<std::pair<std::int64_t, const TraceEntry*>>> by_unit(
      static_cast<std::size_t>(std::max<std::int64_t>(p, 1)));
  for (const auto& e : trace.entries)
    if (e.unit >= 0 && e.unit < p) by_unit[static_cast<std::size_t>(e.unit)].push_back({e.start, &e});
  for (auto& lane : by_unit) {
    std::sort(lane.begin(), lane.end());
    for (std::size_t x = 1; x < lane.size(); ++x)
      if (lane[x].first < lane[x - 1].second->start + task_weight(lane[x - 1].second->task))
        report.violations.push_back({Violation::Type::Overlap,
                                     to_string(lane[x - 1].second->task) + " / " +
                                         to_string(lane[x].second->task)});
  }

  // Precedence: start(Y) >= end(X) for every edge X -> Y.
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (start_of[u] < 0) continue;
    for (std::int32_t v : g.successors[u])
      if (start_of[v] >= 0 && start_of[v] < start_of[u] + g.weights[u])
        report.violations.push_back(
            {Violation::Type::Precedence, to_string(g.tasks[u]) + " -> " + to_string(g.tasks[v])});
  }
  return report;
}

struct Metrics {
  std::int64_t makespan{0};
  std::int64_t peak_concurrency{0};
  double speedup{0};
  double efficiency{0};
};

inline Metrics metrics(const ScheduleTrace& trace) {
  Metrics m;
  m.makespan = trace.makespan;
  std::vector<std::pair<std::int64_t, int>> events;
  events.reserve(trace.entries.size() * 2);
  for (const auto& e : trace.entries) {
    events.push_back({e.start, +1});
    events.push_back({e.end(), -1});
  }
  std::sort(events.begin(), events.end());
  std::int64_t cur = 0;
  for (const auto& [time, delta] : events) {
    cur += delta;
    m.peak_concurrency = std::max(m.peak_concurrency, cur);
  }
  if (trace.makespan > 0) {
    m.speedup = static_cast<double>(total_work(trace.t)) / static_cast<double>(trace.makespan);
    m.efficiency = m.speedup / static_cast<double>(trace.p);
  }
  return m;
}

struct CpRequirement {
  bool reachable{false};
  std::int64_t p{0};
  // p values where the makespan increased relative to p-1 (list-scheduling
  // anomalies), observed during the scan.
  std::vector<std::int64_t> nonmonotonic_p;
};

// Smallest p for which the policy's makespan equals the critical path,
// found by an upward scan (each p checked independently).
inline CpRequirement required_units_for_cp(int t, Policy policy, std::int64_t scan_start,
                                           std::int64_t scan_limit) {
  const std::int64_t cp = graph_critical_path(t);
  const TaskGraph g = build_graph(t);
  CpRequirement result;
  std::int64_t prev = -1;
  for (std::int64_t p = std::max<std::int64_t>(1, scan_start); p <= scan_limit; ++p) {
    const std::int64_t ms = simulate(g, p, policy).makespan;
    if (prev >= 0 && ms > prev) result.nonmonotonic_p.push_back(p);
    prev = ms;
    if (ms == cp) {
      result.reachable = true;
      result.p = p;
      return result;
    }
  }
  return result;
}

inline CpRequirement required_units_for_cp(int t, Policy policy) {
  const std::int64_t cap = std::max<std::int64_t>(16, 2LL * t * t);
  return required_units_for_cp(t, policy, 1, cap);
}

} // namespace cholsched
