#pragma once

// Concurrency profile of the unbounded-processor ALAP schedule. h(t,K) is
// the number of tasks executing at time tau-K, where tau = 9t-10 is the
// makespan. A task X runs over K in [cp(X)-w(X)+1, cp(X)].
//
// Two evaluation modes:
//   Corrected    — exact per-kind counts; matches simulation tick for tick.
//   PaperLiteral — the published closed forms verbatim, which miss the sink
//                  POTRF, clamp nothing, and start the G-column sum one
//                  column too late.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cholsched/critical_path.hpp"
#include "cholsched/intmath.hpp"
#include "cholsched/task_graph.hpp"

namespace cholsched {

enum class FormulaMode { Corrected, PaperLiteral };

namespace detail {

inline void check_profile_args(int t, std::int64_t K) {
  if (t < 2) throw std::domain_error("profile requires t >= 2");
  if (K < 1 || K > 9LL * t - 10) throw std::domain_error("K out of range [1, 9t-10]");
}

// POTRF C_i (i < t) runs exactly at K = cp = 9(t-i)-1, i.e. K = 8 mod 9.
inline std::int64_t potrf_height(int t, std::int64_t K, FormulaMode mode) {
  std::int64_t n = (K % 9 == 8) ? 1 : 0;
  if (mode == FormulaMode::Corrected && K == 1) ++n; // sink C_t
  (void)t;
  return n;
}

// TRSM level l = t-1-j runs over K in [9l+5, 9l+7], with l+1 tasks active.
inline std::int64_t trsm_height(int t, std::int64_t K, FormulaMode /*mode*/) {
  const std::int64_t r = K % 9;
  if (r < 5 || r > 7) return 0;
  const std::int64_t l = K / 9;
  if (l > t - 2) return 0;
  return l + 1;
}

// S-floor of level i < t spans K in [9(t-i), 9t-6i-4] with one task active;
// the level-t floor spans [2, 3t-2].
inline std::int64_t syrk_height(int t, std::int64_t K, FormulaMode mode) {
  const std::int64_t tt = t;
  const std::int64_t i_min = ceil_div(9 * tt - K, 9);
  const std::int64_t level_t = (2 <= K && K <= 3 * tt - 2) ? 1 : 0;
  if (mode == FormulaMode::PaperLiteral) {
    const std::int64_t i_max = std::min(tt, floor_div(18 * tt - 2 * K - 7, 12));
    return i_max - i_min + 1 + level_t;
  }
  const std::int64_t i_max = std::min(tt - 1, floor_div(9 * tt - 4 - K, 6));
  return std::max<std::int64_t>(0, i_max - i_min + 1) + level_t;
}

// G-column j is active for K in [9t-9j-1, 9t-3j-8]; each active column
// contributes t-j tasks (one k per column, all rows i in (j, t]).
inline std::int64_t gemm_height(int t, std::int64_t K, FormulaMode mode) {
  const std::int64_t tt = t;
  const std::int64_t j_max = std::min(tt - 1, floor_div(9 * tt - K - 8, 3));
  std::int64_t j_min;
  if (mode == FormulaMode::PaperLiteral) {
    j_min = ceil_div(9 * tt - K - 2, 9) + 1; // printed sum starts at j_min+1
  } else {
    j_min = std::max<std::int64_t>(2, ceil_div(9 * tt - K - 1, 9));
  }
  if (j_max < j_min) return 0;
  const std::int64_t n = j_max - j_min + 1;
  return n * tt - (j_min + j_max) * n / 2;
}

} // namespace detail

inline std::int64_t kind_height(Kind kind, int t, std::int64_t K,
                                FormulaMode mode = FormulaMode::Corrected) {
  detail::check_profile_args(t, K);
  switch (kind) {
  case Kind::Potrf:
    return detail::potrf_height(t, K, mode);
  case Kind::Trsm:
    return detail::trsm_height(t, K, mode);
  case Kind::Syrk:
    return detail::syrk_height(t, K, mode);
  case Kind::Gemm:
    return detail::gemm_height(t, K, mode);
  }
  throw std::domain_error("unknown task kind");
}

inline std::int64_t height(int t, std::int64_t K, FormulaMode mode = FormulaMode::Corrected) {
  detail::check_profile_args(t, K);
  return detail::potrf_height(t, K, mode) + detail::trsm_height(t, K, mode) +
         detail::syrk_height(t, K, mode) + detail::gemm_height(t, K, mode);
}

struct HeightProfile {
  int t{0};
  // Index K-1, for K in 1..9t-10.
  std::vector<std::int64_t> m_c, m_t, m_s, m_g, total;

  std::int64_t span() const { return static_cast<std::int64_t>(total.size()); }
};

inline HeightProfile build_profile(int t, FormulaMode mode = FormulaMode::Corrected) {
  if (t < 2) throw std::domain_error("profile requires t >= 2");
  HeightProfile prof;
  prof.t = t;
  const std::int64_t span = 9LL * t - 10;
  for (std::int64_t K = 1; K <= span; ++K) {
    prof.m_c.push_back(detail::potrf_height(t, K, mode));
    prof.m_t.push_back(detail::trsm_height(t, K, mode));
    prof.m_s.push_back(detail::syrk_height(t, K, mode));
    prof.m_g.push_back(detail::gemm_height(t, K, mode));
    prof.total.push_back(prof.m_c.back() + prof.m_t.back() + prof.m_s.back() + prof.m_g.back());
  }
  return prof;
}

// Zone boundaries: K_S = 3t+2, K_G = 6t-5. Returns 1/2/3, or 0 for the
// unassigned boundary point K = K_S.
inline int zone_of(int t, std::int64_t K) {
  const std::int64_t ks = 3LL * t + 2, kg = 6LL * t - 5;
  if (K < ks) return 1;
  if (K == ks) return 0;
  if (K <= kg) return 2;
  return 3;
}

struct HeightBounds {
  double lower{0};
  double upper{0};
};

namespace detail {

inline HeightBounds zone_bounds(int zone, int t, std::int64_t Ki) {
  const double K = static_cast<double>(Ki);
  const double td = static_cast<double>(t);
  switch (zone) {
  case 1:
    return {K * K / 162 - 5 * K / 162 - 25.0 / 81, K * K / 162 + 31 * K / 162 + 155.0 / 81};
  case 2:
    return {K * K / 162 - 16 * K / 162 + td / 2 - 289.0 / 324,
            K * K / 162 + 2 * K / 81 + td / 2 + 755.0 / 324};
  case 3:
    return {-4 * K * K / 81 + 2 * K * td / 3 - 197 * K / 162 - 2 * td * td + 119 * td / 18 -
                587.0 / 108,
            -4 * K * K / 81 + 2 * K * td / 3 - 107 * K / 162 - 2 * td * td + 83 * td / 18 +
                37.0 / 108};
  }
  throw std::domain_error("zone must be 1, 2 or 3");
}

} // namespace detail

// Zone quadratics sandwiching h(t,K). At the unassigned boundary K = 3t+2
// both neighbouring zones are evaluated and the permissive envelope is
// returned.
inline HeightBounds height_bounds(int t, std::int64_t K) {
  detail::check_profile_args(t, K);
  const int zone = zone_of(t, K);
  if (zone != 0) return detail::zone_bounds(zone, t, K);
  const HeightBounds z1 = detail::zone_bounds(1, t, K);
  const HeightBounds z2 = detail::zone_bounds(2, t, K);
  return {std::min(z1.lower, z2.lower), std::max(z1.upper, z2.upper)};
}

struct PeakHeight {
  std::int64_t k{0}; // argmax (largest K on ties)
  std::int64_t h{0};
};

// Exhaustive scan over K; O(t) evaluations. Ties go to the largest K, the
// latest real time at which the peak is reached.
inline PeakHeight peak_height(int t) {
  if (t < 2) throw std::domain_error("peak_height requires t >= 2");
  PeakHeight best;
  const std::int64_t span = 9LL * t - 10;
  for (std::int64_t K = 1; K <= span; ++K) {
    const std::int64_t h = height(t, K);
    if (h >= best.h) best = {K, h};
  }
  return best;
}

// Processor count sufficient for the ALAP schedule to finish in CP time.
inline double theorem1_bound(int t) {
  check_tile_count(t);
  const double td = static_cast<double>(t);
  return 0.25 * td * td + 0.16 * td + 3.0;
}

// Processor count sufficient for ASAP to finish in CP time: t(t-1)/2.
inline std::int64_t asap_cp_processor_count(int t) {
  if (t < 2) throw std::domain_error("asap_cp_processor_count requires t >= 2");
  return static_cast<std::int64_t>(t) * (t - 1) / 2;
}

} // namespace cholsched
