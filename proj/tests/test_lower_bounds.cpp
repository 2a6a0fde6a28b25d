#include <doctest.h>

#include <cmath>

#include "cholsched/lower_bounds.hpp"
#include "cholsched/task_graph.hpp"

using namespace cholsched;

namespace {

// Independent oracle: count GEMMs with cp - w <= K over the raw index set.
std::int64_t brute_gemm_cumulative(int t, std::int64_t K) {
  std::int64_t count = 0;
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j < i; ++j)
      for (int k = 1; k < j; ++k)
        if (cp_closed_form(TaskId::gemm(i, j, k), t) - 6 <= K) ++count;
  return count;
}

} // namespace

TEST_CASE("gemm cumulative counts") {
  CHECK(gemm_cumulative_enum(8, 25) == 11);
  CHECK(brute_gemm_cumulative(8, 25) == 11);
  CHECK(gemm_cumulative_enum(8, 0) == 0);
  CHECK(gemm_cumulative_enum(8, 62) == 56); // all GEMMs of t=8

  // The published formula undercounts; at (8,25) it gives 7, not 11.
  CHECK(gemm_cumulative_paper(8, 25) == 7);
  CHECK(gemm_cumulative_paper(8, 0) == 0);
}

TEST_CASE("gemm cumulative enum matches the oracle and is monotone") {
  for (int t : {3, 5, 8, 13, 20}) {
    CAPTURE(t);
    std::int64_t prev = 0;
    for (std::int64_t K = 0; K <= 9 * t - 10; ++K) {
      CAPTURE(K);
      const std::int64_t c = gemm_cumulative_enum(t, K);
      CHECK(c == brute_gemm_cumulative(t, K));
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(prev == task_counts(t).gemm); // saturates at the total count
  }
}

TEST_CASE("e2 polynomial values") {
  CHECK(e2_polynomial(25) == doctest::Approx(5.5));
  CHECK(e2_polynomial(7) == doctest::Approx(0.0));
  CHECK(e2_polynomial(100) == doctest::Approx(351.3333).epsilon(1e-4));
}

TEST_CASE("e2 polynomial tracks the enum count within the frozen envelope") {
  const int t = 40;
  for (std::int64_t K = 10; K <= 6 * t - 6; ++K) {
    CAPTURE(K);
    const double diff =
        std::fabs(static_cast<double>(gemm_cumulative_enum(t, K)) - e2_polynomial(static_cast<double>(K)));
    CHECK(diff <= 0.012 * static_cast<double>(K * K) + static_cast<double>(K) + 5.0);
  }
}

TEST_CASE("bound_for_k examples") {
  CHECK(bound_for_k(40, 1000000, 0) == 350); // CP dominates
  CHECK(bound_for_k(40, 1, 0) == 59280);     // t^3 - 3t^2 + 2t, GEMM work only
  CHECK(total_gemm_work(40) == 59280);
  CHECK_THROWS_AS(bound_for_k(40, 0, 0), std::domain_error);
  CHECK_THROWS_AS(bound_for_k(40, 1, -1), std::domain_error);
  CHECK_THROWS_AS(bound_for_k(40, 1, 351), std::domain_error);
}

TEST_CASE("best lower bound at t=40") {
  CHECK(best_lower_bound(40, 343).bound == 350);
  CHECK(best_lower_bound(40, 343, SplitMode::AllKinds).bound == 350);
  CHECK(best_lower_bound(8, 1).bound == 512); // serialization

  // Threshold scan: the exhaustive bound stays above CP until p = 279.
  CHECK(best_lower_bound(40, 278).bound > 350);
  CHECK(best_lower_bound(40, 279).bound == 350);
  CHECK(min_processors_for_cp(40) == 279);
  CHECK(min_processors_for_cp(2) == 1);

  // Asymptotic threshold ratio p / t^2 near 0.185.
  const double ratio = static_cast<double>(min_processors_for_cp(40)) / (40.0 * 40.0);
  CHECK(ratio > 0.15);
  CHECK(ratio < 0.20);
}

TEST_CASE("best lower bound is the max over bound_for_k, floored by total work") {
  for (int t : {5, 8, 13}) {
    CAPTURE(t);
    for (std::int64_t p : {1, 2, 3, 7, 20}) {
      CAPTURE(p);
      const BoundResult r = best_lower_bound(t, p);
      std::int64_t best_k = -1, arg = 0;
      for (std::int64_t K = 0; K <= 9 * t - 10; ++K) {
        const std::int64_t b = bound_for_k(t, p, K);
        if (b > best_k) {
          best_k = b;
          arg = K;
        }
      }
      CHECK(r.bound == std::max(best_k, ceil_div(total_work(t), p)));
      CHECK(r.argmax_k == arg); // smallest K on ties
    }
  }
}

TEST_CASE("bound is non-increasing in p") {
  for (int t : {8, 20}) {
    CAPTURE(t);
    std::int64_t prev = best_lower_bound(t, 1).bound;
    for (std::int64_t p = 2; p <= 2LL * t * t; ++p) {
      const std::int64_t b = best_lower_bound(t, p).bound;
      CHECK(b <= prev);
      prev = b;
    }
    CHECK(prev == 9 * t - 10); // eventually only the critical path remains
  }
}

TEST_CASE("closed-form bound examples") {
  CHECK(closed_form_bound(40, 343) == doctest::Approx(350.0));
  CHECK(closed_form_bound(40, 100) == doctest::Approx(669.8528).epsilon(1e-4));
  CHECK(closed_form_bound(40, 1000000) == doctest::Approx(350.0));
  CHECK_THROWS_AS(closed_form_bound(40, 0), std::domain_error);
}

TEST_CASE("closed form never exceeds the exhaustive bound by more than one") {
  for (int t : {40, 60}) {
    CAPTURE(t);
    for (double alpha = 0.05; alpha <= 0.186; alpha += 0.002) {
      const std::int64_t p = std::max<std::int64_t>(1, static_cast<std::int64_t>(alpha * t * t));
      CAPTURE(p);
      CHECK(closed_form_bound(t, p) <= static_cast<double>(best_lower_bound(t, p).bound) + 1.0);
    }
  }
}

TEST_CASE("argmax K tracks 9*sqrt(2p) at t=100") {
  for (double alpha : {0.05, 0.10, 0.15}) {
    CAPTURE(alpha);
    const std::int64_t p = static_cast<std::int64_t>(alpha * 100 * 100);
    const BoundResult r = best_lower_bound(100, p);
    const double k_inf = 9.0 * std::sqrt(2.0 * static_cast<double>(p));
    CHECK(std::fabs(static_cast<double>(r.argmax_k) - k_inf) <= 0.2 * k_inf);
  }
}
