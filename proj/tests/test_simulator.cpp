#include <doctest.h>

#include <map>

#include "cholsched/alap_profile.hpp"
#include "cholsched/critical_path.hpp"
#include "cholsched/lower_bounds.hpp"
#include "cholsched/simulator.hpp"

using namespace cholsched;

namespace {

constexpr Policy kPolicies[] = {Policy::AlapList, Policy::AsapList, Policy::ForkJoin,
                                Policy::KurzakRows};

// Concurrency at each integer tick of a trace.
std::vector<std::int64_t> tick_concurrency(const ScheduleTrace& trace) {
  std::vector<std::int64_t> conc(static_cast<std::size_t>(trace.makespan), 0);
  for (const auto& e : trace.entries)
    for (std::int64_t tick = e.start; tick < e.end(); ++tick)
      ++conc[static_cast<std::size_t>(tick)];
  return conc;
}

} // namespace

TEST_CASE("policy reference makespans at t=8") {
  const TaskGraph g = build_graph(8);
  CHECK(simulate(g, 16, Policy::AlapList).makespan == 62);
  CHECK(simulate(g, 100, Policy::AlapList).makespan == 62);
  CHECK(simulate(g, 28, Policy::AsapList).makespan == 62);
  CHECK(simulate(g, 28, Policy::ForkJoin).makespan == 68); // barriers cost 6 ticks here
  CHECK(simulate(g, 8, Policy::KurzakRows).makespan == 170);
}

TEST_CASE("p=1 serializes the full work for every policy") {
  for (int t : {2, 5, 8}) {
    CAPTURE(t);
    const TaskGraph g = build_graph(t);
    for (Policy policy : kPolicies) {
      CAPTURE(policy_name(policy));
      CHECK(simulate(g, 1, policy).makespan == total_work(t));
    }
  }
}

TEST_CASE("t=2 is a chain: every policy takes 8 ticks at any p") {
  const TaskGraph g = build_graph(2);
  for (Policy policy : kPolicies)
    for (std::int64_t p : {1, 2, 3})
      CHECK(simulate(g, p, policy).makespan == 8);
}

TEST_CASE("p=0 rejected") {
  const TaskGraph g = build_graph(3);
  CHECK_THROWS_AS(simulate(g, 0, Policy::AlapList), std::domain_error);
  CHECK_THROWS_AS(simulate_forkjoin(3, 0), std::domain_error);
  CHECK_THROWS_AS(simulate_kurzak(3, 0), std::domain_error);
}

TEST_CASE("every produced trace validates") {
  for (int t = 2; t <= 20; t += 3) {
    CAPTURE(t);
    const TaskGraph g = build_graph(t);
    for (std::int64_t p :
         {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}, std::int64_t{5}, std::int64_t{8},
          std::int64_t{13}, static_cast<std::int64_t>(t), static_cast<std::int64_t>(t) * t}) {
      CAPTURE(p);
      for (Policy policy : kPolicies) {
        CAPTURE(policy_name(policy));
        const ScheduleTrace trace = simulate(g, p, policy);
        const ValidationReport report = validate(trace, g, p);
        CHECK(report.ok());
        CHECK(trace.makespan >= std::max(ceil_div(total_work(t), p), graph_critical_path(t)));
      }
    }
  }
}

TEST_CASE("injected faults are caught one by one") {
  const TaskGraph g = build_graph(5);
  const ScheduleTrace good = simulate(g, 3, Policy::AsapList);
  REQUIRE(validate(good, g, 3).ok());

  SUBCASE("precedence violation") {
    ScheduleTrace bad = good;
    // Pull the sink POTRF to time 0, ahead of its predecessors.
    for (auto& e : bad.entries)
      if (e.task == TaskId::potrf(5)) e.start = 0;
    const ValidationReport report = validate(bad, g, 3);
    CHECK_FALSE(report.ok());
    CHECK(report.count(Violation::Type::Precedence) > 0);
    CHECK(report.count(Violation::Type::MissingTask) == 0);
  }

  SUBCASE("overlap violation") {
    ScheduleTrace bad = good;
    // Force the second task of unit 0 onto the first task's interval.
    TraceEntry* first = nullptr;
    TraceEntry* second = nullptr;
    for (auto& e : bad.entries)
      if (e.unit == 0) {
        if (!first || e.start < first->start) first = &e;
      }
    for (auto& e : bad.entries)
      if (e.unit == 0 && &e != first && (!second || e.start < second->start)) second = &e;
    REQUIRE(first);
    REQUIRE(second);
    second->start = first->start;
    const ValidationReport report = validate(bad, g, 3);
    CHECK_FALSE(report.ok());
    CHECK(report.count(Violation::Type::Overlap) == 1);
  }

  SUBCASE("missing and duplicate tasks") {
    ScheduleTrace bad = good;
    bad.entries.back() = bad.entries.front();
    const ValidationReport report = validate(bad, g, 3);
    CHECK(report.count(Violation::Type::DuplicateTask) == 1);
    CHECK(report.count(Violation::Type::MissingTask) == 1);
  }

  SUBCASE("bad unit index") {
    ScheduleTrace bad = good;
    bad.entries.front().unit = 99;
    CHECK(validate(bad, g, 3).count(Violation::Type::BadUnit) == 1);
  }
}

TEST_CASE("metrics") {
  const Metrics m40 = metrics(simulate(build_graph(40), 343, Policy::AlapList));
  CHECK(m40.makespan == 350);
  CHECK(m40.speedup == doctest::Approx(64000.0 / 350.0));
  CHECK(m40.efficiency == doctest::Approx(64000.0 / 350.0 / 343.0));

  const Metrics m8 = metrics(simulate(build_graph(8), 100, Policy::AlapList));
  CHECK(m8.makespan == 62);
  CHECK(m8.peak_concurrency == 16);

  const Metrics m5 = metrics(simulate(build_graph(5), 1, Policy::AsapList));
  CHECK(m5.makespan == 125);
  CHECK(m5.speedup == doctest::Approx(1.0));
}

TEST_CASE("unbounded ALAP concurrency equals the height profile") {
  for (int t : {4, 8, 13}) {
    CAPTURE(t);
    const std::int64_t peak = peak_height(t).h;
    const ScheduleTrace trace = simulate(build_graph(t), peak, Policy::AlapList);
    REQUIRE(trace.makespan == 9 * t - 10);
    const auto conc = tick_concurrency(trace);
    for (std::int64_t K = 1; K <= 9 * t - 10; ++K) {
      CAPTURE(K);
      // Tick tau - K is index makespan - K.
      CHECK(conc[static_cast<std::size_t>(trace.makespan - K)] == height(t, K));
    }
  }
}

TEST_CASE("determinism: repeated runs produce identical traces") {
  const TaskGraph g = build_graph(9);
  for (Policy policy : kPolicies) {
    CAPTURE(policy_name(policy));
    const ScheduleTrace a = simulate(g, 5, policy);
    const ScheduleTrace b = simulate(g, 5, policy);
    REQUIRE(a.entries.size() == b.entries.size());
    CHECK(a.makespan == b.makespan);
    for (std::size_t x = 0; x < a.entries.size(); ++x) {
      CHECK(a.entries[x].task == b.entries[x].task);
      CHECK(a.entries[x].unit == b.entries[x].unit);
      CHECK(a.entries[x].start == b.entries[x].start);
    }
  }
}

TEST_CASE("required units to reach the critical path") {
  const CpRequirement alap = required_units_for_cp(8, Policy::AlapList);
  CHECK(alap.reachable);
  CHECK(alap.p == 14); // list scheduling beats the 16-unit profile peak here
  CHECK(alap.p <= peak_height(8).h);

  const CpRequirement asap = required_units_for_cp(8, Policy::AsapList);
  CHECK(asap.reachable);
  CHECK(asap.p <= asap_cp_processor_count(8)); // sufficiency bound t(t-1)/2 = 28

  const CpRequirement fj = required_units_for_cp(8, Policy::ForkJoin);
  CHECK_FALSE(fj.reachable); // barriers keep fork-join above CP at any p
}

TEST_CASE("makespans dominate the lower bounds") {
  for (int t : {5, 10}) {
    CAPTURE(t);
    const TaskGraph g = build_graph(t);
    for (std::int64_t p : {1, 2, 5, 10, 30}) {
      CAPTURE(p);
      const std::int64_t lb = best_lower_bound(t, p).bound;
      const double cf = closed_form_bound(t, p);
      for (Policy policy : kPolicies) {
        CAPTURE(policy_name(policy));
        const std::int64_t ms = simulate(g, p, policy).makespan;
        CHECK(ms >= lb);
        CHECK(static_cast<double>(ms) >= cf - 1e-9);
      }
    }
  }
}

TEST_CASE("trace invariants: end = start + weight, makespan = max end") {
  const TaskGraph g = build_graph(7);
  for (Policy policy : kPolicies) {
    const ScheduleTrace trace = simulate(g, 4, policy);
    std::int64_t max_end = 0;
    for (const auto& e : trace.entries) {
      CHECK(e.end() == e.start + task_weight(e.task));
      max_end = std::max(max_end, e.end());
    }
    CHECK(trace.makespan == max_end);
    CHECK(trace.entries.size() == g.size());
  }
}
