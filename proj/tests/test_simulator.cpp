#include <doctest.h>

#include "core.hpp"
#include "instances.hpp"
#include "oracle.hpp"
#include "reference.hpp"
#include "simulator.hpp"

using namespace wsrpt;
using ref::q;

namespace {

const TieRule kRunning = TieRule::prefer_running();

Instance worst_basic(const char* delta) {
  ScenarioParams p;
  p.y = q("0.8157");
  p.v = q("0.7066");
  p.delta = q(delta);
  return gen_basic(p);
}

Schedule scripted(const Instance& inst) {
  return simulate(inst, Policy::kWsrpt, TieRule::scripted(*inst.tie_script()));
}

}  // namespace

TEST_CASE("policy and tie names round-trip") {
  for (Policy p : {Policy::kWsrpt, Policy::kWsptPreemptive, Policy::kSrpt})
    CHECK(parse_policy(to_string(p)) == p);
  for (TieKind t : {TieKind::kPreferRunning, TieKind::kPreferNewLongest, TieKind::kPreferNewShortest,
                    TieKind::kScripted, TieKind::kExhaustiveWorst})
    CHECK(parse_tie_kind(to_string(t)) == t);
  CHECK_THROWS_AS(parse_policy("fifo"), Error);
  CHECK_THROWS_AS(parse_tie_kind("coin"), Error);
}

TEST_CASE("policy keys") {
  Job j{0, 0, 4, 2};
  CHECK(policy_key(Policy::kWsrpt, j, 1) == 2);
  CHECK(policy_key(Policy::kWsptPreemptive, j, 1) == q("1/2"));
  CHECK(policy_key(Policy::kSrpt, j, 2) == q("1/2"));
}

TEST_CASE("WSRPT matches a naive reference simulator") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Instance inst = gen_random(1 + seed % 7, seed);
    Schedule s = simulate(inst, Policy::kWsrpt, kRunning);
    s.validate(inst);
    auto done = ref::wsrpt_completions(inst);
    CAPTURE(seed);
    for (const Job& j : inst.jobs()) CHECK(s.completion(j.id) == done.at(j.id));
  }
}

TEST_CASE("unit weights: SRPT and WSRPT objectives agree") {
  RandomRanges r;
  r.unit_weight = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = gen_random(6, seed, r);
    CHECK(objective(simulate(inst, Policy::kWsrpt, kRunning), inst) ==
          objective(simulate(inst, Policy::kSrpt, kRunning), inst));
  }
}

TEST_CASE("zero releases: WSRPT runs jobs in ratio order without preemption") {
  RandomRanges r;
  r.zero_release = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = gen_random(6, seed, r);
    Schedule s = simulate(inst, Policy::kWsrpt, kRunning);
    CHECK(s.slices().size() == inst.size());
    for (std::size_t i = 1; i < s.slices().size(); ++i) {
      const Job& a = inst.job(s.slices()[i - 1].job);
      const Job& b = inst.job(s.slices()[i].job);
      CHECK(a.weight / a.processing >= b.weight / b.processing);
    }
    CHECK(objective(s, inst) == objective(simulate(inst, Policy::kWsptPreemptive, kRunning), inst));
  }
}

TEST_CASE("basic scenario: long job completes at time 1") {
  Instance inst = worst_basic("1/100");
  Schedule s = simulate(inst, Policy::kWsrpt, kRunning);
  CHECK(s.completion(0) == 1);
  CHECK(s.slices().front().job == 0);
  CHECK(s.slices().front().end == 1);
  CHECK(scripted(inst) == s);
}

TEST_CASE("basic scenario objective approaches the continuous value") {
  Instance inst = worst_basic("1/1000");
  double c = to_double(objective(scripted(inst), inst));
  CHECK(c == doctest::Approx(6.5168).epsilon(0.003));
}

TEST_CASE("property: no idle time while work is pending, total work exact") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = gen_random(7, seed);
    Schedule s = simulate(inst, Policy::kWsrpt, kRunning);
    s.validate(inst);
    auto sl = s.slices();
    for (std::size_t i = 1; i < sl.size(); ++i) {
      if (sl[i - 1].end == sl[i].start) continue;
      // A gap is allowed only if every job released before it has completed.
      for (const Job& j : inst.jobs())
        if (j.release <= sl[i - 1].end) CHECK(s.completion(j.id) <= sl[i - 1].end);
    }
  }
}

TEST_CASE("property: preemptions happen only at releases") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = gen_random(7, seed);
    Schedule s = simulate(inst, Policy::kWsrpt, kRunning);
    for (const Slice& sl : s.slices()) {
      if (s.completion(sl.job) == sl.end) continue;
      bool at_release = false;
      for (const Job& j : inst.jobs()) at_release |= j.release == sl.end;
      CHECK(at_release);
    }
  }
}

TEST_CASE("property: simulate is deterministic") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = gen_random(7, seed);
    for (Policy p : {Policy::kWsrpt, Policy::kSrpt, Policy::kWsptPreemptive})
      CHECK(simulate(inst, p, kRunning) == simulate(inst, p, kRunning));
  }
}

TEST_CASE("property: exhaustive worst dominates every other tie rule") {
  // Half-integral data produce many ties.
  RandomRanges r;
  r.max_weight = 2;
  r.max_processing = 2;
  r.denominator = 1;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Instance inst = gen_random(6, seed, r);
    auto worst = simulate_exhaustive_worst(inst, Policy::kWsrpt, 1 << 20);
    worst.schedule.validate(inst);
    CHECK(objective(worst.schedule, inst) == worst.objective);
    CHECK(simulate(inst, Policy::kWsrpt, {TieKind::kExhaustiveWorst, {}}) == worst.schedule);
    for (TieKind t : {TieKind::kPreferRunning, TieKind::kPreferNewLongest, TieKind::kPreferNewShortest})
      CHECK(objective(simulate(inst, Policy::kWsrpt, {t, {}}), inst) <= worst.objective);
  }
}

TEST_CASE("tie rules pick the documented job") {
  // J0 runs from 0; J1 and J2 arrive at 1 with the same ratio as J0's remainder.
  Instance inst = ref::make({{"0", "2", "2"}, {"1", "1", "2"}, {"1", "2", "4"}});
  auto first_after = [&](TieKind k) {
    Schedule s = simulate(inst, Policy::kWsrpt, {k, {}});
    for (const Slice& sl : s.slices())
      if (sl.start <= 1 && sl.end > 1) return sl.job;
    return -1;
  };
  CHECK(first_after(TieKind::kPreferRunning) == 0);
  CHECK(first_after(TieKind::kPreferNewLongest) == 2);
  CHECK(first_after(TieKind::kPreferNewShortest) == 1);
  CHECK(simulate(inst, Policy::kWsrpt, TieRule::scripted({{1, 2}})).slices()[1].job == 2);
}

TEST_CASE("tie rule errors") {
  Instance inst = ref::make({{"0", "2", "2"}, {"1", "1", "2"}, {"3", "1", "5"}});
  try {
    simulate(inst, Policy::kWsrpt, TieRule::scripted({{1, 2}}));
    FAIL("script naming a non-tied job accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  Instance ties = ref::make({{"0", "1", "1"}, {"0", "1", "1"}, {"0", "1", "1"}, {"0", "1", "1"}});
  try {
    simulate_exhaustive_worst(ties, Policy::kWsrpt, 2);
    FAIL("budget not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
}

TEST_CASE("equality instance checker") {
  CHECK(is_equality_instance(ref::make({{"0", "1", "1"}}), kRunning).pass);

  auto report = is_equality_instance(ref::make({{"0", "1", "1"}, {"0.5", "0.1", "0.1"}}), kRunning);
  CHECK_FALSE(report.pass);
  REQUIRE(!report.violations.empty());
  CHECK(report.violations.front().t == q("1/2"));

  // The running job's Smith ratio is 1/(1-1/2) = 2 at 1/2.
  CHECK(is_equality_instance(ref::make({{"0", "1", "1"}, {"0.5", "0.1", "0.2"}}), kRunning).pass);
}

TEST_CASE("generated instances pass the equality check with their script") {
  for (const char* d : {"1/10", "1/50", "1/200"}) {
    Instance inst = worst_basic(d);
    CHECK(is_equality_instance(inst, TieRule::scripted(*inst.tie_script())).pass);
  }
  ScenarioParams z;
  z.y = q("0.75");
  z.v = q("0.7062");
  z.z = q("0.3623");
  z.delta = q("1/100");
  Instance with_block = gen_basic(z);
  CHECK(is_equality_instance(with_block, TieRule::scripted(*with_block.tie_script())).pass);

  NestedParams n;
  n.outer.y = n.inner.y = q("0.8157");
  n.outer.v = n.inner.v = q("0.7066");
  n.outer.delta = n.inner.delta = q("1/100");
  n.p_s = 50;
  Instance nested = gen_nested(n);
  CHECK(is_equality_instance(nested, TieRule::scripted(*nested.tie_script())).pass);
}

TEST_CASE("segments") {
  Instance one = ref::make({{"0", "3", "1"}});
  auto segs = segments(simulate(one, Policy::kWsrpt, kRunning), one);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start == 0);
  CHECK(segs[0].end == 3);
  CHECK(segs[0].children.empty());

  Instance basic = worst_basic("1/50");
  Schedule bs = scripted(basic);
  segs = segments(bs, basic);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start == 0);
  CHECK(segs[0].end == bs.makespan());
  CHECK(segs[0].members.size() == basic.size());

  NestedParams n;
  n.outer.y = n.inner.y = q("0.8157");
  n.outer.v = n.inner.v = q("0.7066");
  n.outer.delta = n.inner.delta = q("1/50");
  n.p_s = 50;
  Instance nested = gen_nested(n);
  segs = segments(scripted(nested), nested);
  REQUIRE(segs.size() == 1);
  REQUIRE(segs[0].children.size() == 1);
  const Segment& inner = segs[0].children[0];
  CHECK(inner.start > segs[0].start);
  CHECK(inner.end < segs[0].end);
  CHECK(inner.children.empty());
  CHECK(inner.depth == 1);
}

TEST_CASE("split_job") {
  Instance one = ref::make({{"0", "1", "1"}});
  CHECK(split_job(one, 0, 1) == one);

  Instance halves = split_job(one, 0, 2);
  REQUIRE(halves.size() == 2);
  for (const Job& j : halves.jobs()) {
    CHECK(j.processing == q("1/2"));
    CHECK(j.weight == q("1/2"));
  }
  CHECK(objective(simulate(one, Policy::kWsrpt, kRunning), one) -
            objective(simulate(halves, Policy::kWsrpt, kRunning), halves) ==
        q("1/4"));
  CHECK_THROWS_AS(split_job(one, 4, 2), Error);
  CHECK_THROWS_AS(split_job(one, 0, 0), Error);
}

TEST_CASE("property: split decrease on an isolated job is w p (q-1)/(2q)") {
  // Job 1 runs alone on [3, 3 + p) between the other jobs.
  Instance inst = ref::make({{"0", "3", "3"}, {"3", "3/2", "5/2"}, {"6", "1", "1"}});
  Rational base = objective(simulate(inst, Policy::kWsrpt, kRunning), inst);
  const Job& j = inst.job(1);
  for (int k = 1; k <= 8; ++k) {
    Instance s = split_job(inst, 1, k);
    Rational got = base - objective(simulate(s, Policy::kWsrpt, kRunning), s);
    CHECK(got == j.weight * j.processing * (k - 1) / (2 * k));
  }
}

TEST_CASE("splitting raises the ratio on the two-long-job example") {
  // J1 = (0, 1, 1), J2 = (0, 2, 2) and a job at 1 with J2's Smith ratio.
  Instance inst = ref::make({{"0", "1", "1"}, {"0", "2", "2"}, {"1", "1", "2"}});
  double last = 0;
  for (int k : {1, 2, 4, 8}) {
    Instance s = split_job(inst, 2, k);
    Rational on = simulate_exhaustive_worst(s, Policy::kWsrpt, 1 << 20).objective;
    Rational opt = optimal_bruteforce(s).objective;
    double r = to_double(on / opt);
    CAPTURE(k);
    CHECK(r >= last);
    last = r;
  }
  CHECK(last > 1);
}
