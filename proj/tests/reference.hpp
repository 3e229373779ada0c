// Naive reference implementations used as independent oracles in tests.
#ifndef WSRPT_TESTS_REFERENCE_HPP_
#define WSRPT_TESTS_REFERENCE_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "core.hpp"

namespace ref {

using wsrpt::Instance;
using wsrpt::Job;
using wsrpt::JobId;
using wsrpt::Rational;

inline Rational q(const char* s) { return wsrpt::parse_rational(s); }

inline Instance make(std::vector<std::array<const char*, 3>> rows) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < rows.size(); ++i)
    jobs.push_back({static_cast<JobId>(i), q(rows[i][0]), q(rows[i][1]), q(rows[i][2])});
  return Instance(std::move(jobs));
}

// Completion times of the preemptive list schedule for `order`, found by
// stepping from event to event over a plain vector.
inline std::map<JobId, Rational> list_completions(const Instance& inst, const std::vector<JobId>& order) {
  std::vector<Job> jobs(inst.jobs().begin(), inst.jobs().end());
  std::map<JobId, Rational> left, done;
  for (const Job& j : jobs) left[j.id] = j.processing;
  Rational t = jobs.front().release;
  for (const Job& j : jobs) t = std::min(t, j.release);
  while (done.size() < jobs.size()) {
    JobId pick = -1;
    for (JobId id : order)
      if (!done.count(id) && inst.job(id).release <= t) {
        pick = id;
        break;
      }
    Rational next_release = -1;
    for (const Job& j : jobs)
      if (j.release > t && (next_release < 0 || j.release < next_release)) next_release = j.release;
    if (pick < 0) {
      t = next_release;
      continue;
    }
    Rational stop = t + left[pick];
    if (next_release > 0 && next_release < stop) stop = next_release;
    left[pick] -= stop - t;
    t = stop;
    if (left[pick] == 0) done[pick] = t;
  }
  return done;
}

inline Rational weighted(const Instance& inst, const std::map<JobId, Rational>& done) {
  Rational total = 0;
  for (const Job& j : inst.jobs()) total += j.weight * done.at(j.id);
  return total;
}

// Minimum over all n! priority orders, no pruning.
inline Rational enumerate_optimum(const Instance& inst) {
  std::vector<JobId> order;
  for (const Job& j : inst.jobs()) order.push_back(j.id);
  std::sort(order.begin(), order.end());
  bool first = true;
  Rational best;
  do {
    Rational v = weighted(inst, list_completions(inst, order));
    if (first || v < best) best = v;
    first = false;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// WSRPT with prefer-running ties (lowest id otherwise), recomputing every
// key from scratch at each event.
inline std::map<JobId, Rational> wsrpt_completions(const Instance& inst) {
  std::vector<Job> jobs(inst.jobs().begin(), inst.jobs().end());
  std::map<JobId, Rational> left, done;
  for (const Job& j : jobs) left[j.id] = j.processing;
  Rational t = jobs.front().release;
  for (const Job& j : jobs) t = std::min(t, j.release);
  JobId running = -1;
  while (done.size() < jobs.size()) {
    JobId pick = -1;
    Rational best;
    for (const Job& j : jobs) {
      if (done.count(j.id) || j.release > t) continue;
      Rational key = j.weight / left[j.id];
      if (pick < 0 || key > best || (key == best && j.id == running)) {
        if (pick >= 0 && key == best && pick == running) continue;
        pick = j.id;
        best = key;
      }
    }
    Rational next_release = -1;
    for (const Job& j : jobs)
      if (j.release > t && (next_release < 0 || j.release < next_release)) next_release = j.release;
    if (pick < 0) {
      t = next_release;
      running = -1;
      continue;
    }
    Rational stop = t + left[pick];
    if (next_release > 0 && next_release < stop) stop = next_release;
    left[pick] -= stop - t;
    t = stop;
    running = pick;
    if (left[pick] == 0) {
      done[pick] = t;
      running = -1;
    }
  }
  return done;
}

}  // namespace ref

#endif  // WSRPT_TESTS_REFERENCE_HPP_
