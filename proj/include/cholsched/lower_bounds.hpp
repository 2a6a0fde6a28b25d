#pragma once

// Makespan lower bounds for p identical units, built from the E1/E2 split:
// E2 = tasks with cp(X)-w(X) <= K, E1 its complement. Any schedule needs at
// least w(E1)/p + K ticks, and never less than max(CP, TW/p). The default
// mode counts GEMM work only, which is what the published curves use; the
// all-kinds variant is available as an option.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cholsched/critical_path.hpp"
#include "cholsched/intmath.hpp"
#include "cholsched/task_graph.hpp"

namespace cholsched {

enum class SplitMode { GemmOnly, AllKinds };

inline std::int64_t total_gemm_work(int t) {
  check_tile_count(t);
  const std::int64_t tt = t;
  return tt * tt * tt - 3 * tt * tt + 2 * tt;
}

// Exact count of GEMMs G_{i,j,k} with cp - w <= K, i.e. 9t-3j-6k-8 <= K.
// Enumerates the (j,k) index pairs; every pair contributes a full column of
// t-j row indices. This is the module's ground truth.
inline std::int64_t gemm_cumulative_enum(int t, std::int64_t K) {
  check_tile_count(t);
  if (K < 0) throw std::domain_error("K must be >= 0");
  std::int64_t count = 0;
  for (int j = 2; j < t; ++j)
    for (int k = 1; k < j; ++k)
      if (9LL * t - 3 * j - 6 * k - 8 <= K) count += t - j;
  return count;
}

// The published cumulative-distribution formula, verbatim: sum over j from
// j_min+1 to t-1 of (t-j)(j - k_min^(j)), each term clamped at >= 0.
inline std::int64_t gemm_cumulative_paper(int t, std::int64_t K) {
  check_tile_count(t);
  if (K < 0) throw std::domain_error("K must be >= 0");
  const std::int64_t tt = t;
  const std::int64_t j_min = ceil_div(9 * tt - K - 2, 9);
  const std::int64_t j_max = tt - 1;
  std::int64_t count = 0;
  for (std::int64_t j = j_min + 1; j <= j_max; ++j) {
    if (j < 2) continue;
    // k_min^(j) = max(1, ceil(3t/2 - j/2 - K/6 - 7/6))
    const std::int64_t k_min = std::max<std::int64_t>(1, ceil_div(9 * tt - 3 * j - K - 7, 6));
    count += (tt - j) * std::max<std::int64_t>(0, j - k_min);
  }
  return count;
}

// Asymptotic count of tasks in E2: (K-7)(K^2+10K+16)/2916.
inline double e2_polynomial(double K) {
  return (K - 7) * (K * K + 10 * K + 16) / 2916.0;
}

namespace detail {

// Work of E1 (tasks with cp - w > K), by split mode.
inline std::int64_t e1_work(int t, std::int64_t K, SplitMode mode) {
  if (mode == SplitMode::GemmOnly) return total_gemm_work(t) - 6 * gemm_cumulative_enum(t, K);
  std::int64_t work = 0;
  for (int i = 1; i <= t; ++i) {
    const TaskId c = TaskId::potrf(i);
    if (cp_closed_form(c, t) - 1 > K) work += 1;
    for (int j = 1; j < i; ++j) {
      if (cp_closed_form(TaskId::trsm(i, j), t) - 3 > K) work += 3;
      if (cp_closed_form(TaskId::syrk(i, j), t) - 3 > K) work += 3;
      for (int k = 1; k < j; ++k)
        if (cp_closed_form(TaskId::gemm(i, j, k), t) - 6 > K) work += 6;
    }
  }
  return work;
}

} // namespace detail

inline std::int64_t bound_for_k(int t, std::int64_t p, std::int64_t K,
                                SplitMode mode = SplitMode::GemmOnly) {
  check_tile_count(t);
  if (p < 1) throw std::domain_error("p must be >= 1");
  if (K < 0 || K > graph_critical_path(t)) throw std::domain_error("K out of range");
  return std::max(graph_critical_path(t), ceil_div(detail::e1_work(t, K, mode), p) + K);
}

struct BoundResult {
  std::int64_t bound{0};
  std::int64_t argmax_k{0};
};

// Exhaustive max of bound_for_k over integer K in [0, CP], floored by the
// total-work bound ceil(t^3/p). Smallest K wins ties.
inline BoundResult best_lower_bound(int t, std::int64_t p, SplitMode mode = SplitMode::GemmOnly) {
  check_tile_count(t);
  if (p < 1) throw std::domain_error("p must be >= 1");
  const std::int64_t cp = graph_critical_path(t);

  // Cumulative E2 work per K, one O(t^2) (or O(t^3)) pass.
  std::vector<std::int64_t> e2_work_at(static_cast<std::size_t>(cp) + 1, 0);
  auto deposit = [&](std::int64_t threshold, std::int64_t w) {
    if (threshold <= cp) e2_work_at[static_cast<std::size_t>(std::max<std::int64_t>(0, threshold))] += w;
  };
  std::int64_t total = 0;
  if (mode == SplitMode::GemmOnly) {
    for (int j = 2; j < t; ++j)
      for (int k = 1; k < j; ++k) {
        deposit(9LL * t - 3 * j - 6 * k - 8, 6LL * (t - j));
        total += 6LL * (t - j);
      }
  } else {
    for (int i = 1; i <= t; ++i) {
      deposit(cp_closed_form(TaskId::potrf(i), t) - 1, 1);
      total += 1;
      for (int j = 1; j < i; ++j) {
        deposit(cp_closed_form(TaskId::trsm(i, j), t) - 3, 3);
        deposit(cp_closed_form(TaskId::syrk(i, j), t) - 3, 3);
        total += 6;
        for (int k = 1; k < j; ++k) {
          deposit(cp_closed_form(TaskId::gemm(i, j, k), t) - 6, 6);
          total += 6;
        }
      }
    }
  }

  BoundResult best{cp, 0};
  std::int64_t e2 = 0;
  for (std::int64_t K = 0; K <= cp; ++K) {
    e2 += e2_work_at[static_cast<std::size_t>(K)];
    const std::int64_t candidate = std::max(cp, ceil_div(total - e2, p) + K);
    if (candidate > best.bound) best = {candidate, K};
  }
  best.bound = std::max(best.bound, ceil_div(total_work(t), p));
  return best;
}

// The closed-form bound. The sqrt term stems from evaluating the split at
// K = 9*sqrt(2p), which is only a feasible split parameter while it stays
// below 6t-4; beyond that, only the work and critical-path floors apply.
inline double closed_form_bound(int t, std::int64_t p) {
  check_tile_count(t);
  if (p < 1) throw std::domain_error("p must be >= 1");
  const double td = static_cast<double>(t);
  const double pd = static_cast<double>(p);
  const double work_term = td * td * td / pd;
  double bound = std::max(work_term, static_cast<double>(graph_critical_path(t)));
  const double k_inf = 9.0 * std::sqrt(2.0 * pd);
  if (k_inf < 6.0 * td - 4.0)
    bound = std::max(bound, work_term - 3.0 * td * td / pd + 6.0 * std::sqrt(2.0 * pd) - 7.0);
  return bound;
}

// Smallest p whose best lower bound drops to the critical path. The bound is
// non-increasing in p, so binary search applies.
inline std::int64_t min_processors_for_cp(int t) {
  if (t < 2) return 1;
  const std::int64_t cp = graph_critical_path(t);
  std::int64_t lo = 1, hi = static_cast<std::int64_t>(t) * t;
  while (best_lower_bound(t, hi).bound > cp) hi *= 2;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (best_lower_bound(t, mid).bound <= cp)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

} // namespace cholsched
