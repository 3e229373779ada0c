#include "oracle.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace wsrpt {

Schedule priority_schedule(const Instance& instance, const std::vector<JobId>& order) {
  std::map<JobId, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!instance.contains(order[i]))
      throw Error(ErrorCode::kInvalidArgument, "order names unknown job " + std::to_string(order[i]));
    if (!rank.emplace(order[i], i).second)
      throw Error(ErrorCode::kInvalidArgument, "order repeats job " + std::to_string(order[i]));
  }
  if (rank.size() != instance.size())
    throw Error(ErrorCode::kInvalidArgument, "order does not cover every job");

  std::vector<const Job*> by_release;
  for (const Job& j : instance.jobs()) by_release.push_back(&j);
  std::stable_sort(by_release.begin(), by_release.end(),
                   [](const Job* a, const Job* b) { return a->release < b->release; });

  std::map<JobId, Rational> remaining;
  std::set<std::pair<std::size_t, JobId>> ready;
  std::vector<Slice> slices;
  std::size_t next = 0;
  Rational t = by_release.front()->release;
  auto admit = [&]() {
    while (next < by_release.size() && by_release[next]->release <= t) {
      const Job* j = by_release[next++];
      remaining[j->id] = j->processing;
      ready.insert({rank[j->id], j->id});
    }
  };
  admit();
  while (!ready.empty() || next < by_release.size()) {
    if (ready.empty()) {
      t = by_release[next]->release;
      admit();
    }
    JobId id = ready.begin()->second;
    Rational stop = t + remaining[id];
    if (next < by_release.size() && by_release[next]->release < stop) stop = by_release[next]->release;
    slices.push_back({id, t, stop});
    remaining[id] -= stop - t;
    t = stop;
    if (remaining[id] == 0) ready.erase(ready.begin());
    admit();
  }
  return Schedule(std::move(slices));
}

// ---------------------------------------------------------------------------
// Branch and bound over priority orders. Each appended job gets the lowest
// priority so far, so it only fills idle gaps the prefix leaves after its
// release. Its completion if appended next bounds its completion anywhere
// later in the order.

namespace {

struct Interval {
  Rational start;
  Rational end;
};
using Busy = std::vector<Interval>;

Rational completion_if_placed(const Busy& busy, const Rational& release, const Rational& work) {
  Rational cur = release;
  Rational need = work;
  for (const Interval& iv : busy) {
    if (iv.end <= cur) continue;
    if (iv.start > cur) {
      Rational gap = iv.start - cur;
      if (gap >= need) return cur + need;
      need -= gap;
    }
    cur = iv.end;
  }
  return cur + need;
}

Busy place(const Busy& busy, const Rational& release, const Rational& work) {
  Busy out;
  out.reserve(busy.size() + 2);
  Rational cur = release;
  Rational need = work;
  auto push = [&](const Rational& s, const Rational& e) {
    if (!out.empty() && out.back().end == s) {
      out.back().end = e;
    } else {
      out.push_back({s, e});
    }
  };
  for (const Interval& iv : busy) {
    if (need > 0 && iv.end > cur) {
      if (iv.start > cur) {
        Rational gap = iv.start - cur;
        Rational take = gap < need ? gap : need;
        push(cur, cur + take);
        need -= take;
      }
      cur = iv.end;
    }
    push(iv.start, iv.end);
  }
  if (need > 0) push(cur, cur + need);
  return out;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const Instance& instance) {
    for (const Job& j : instance.jobs()) jobs_.push_back(&j);
    std::sort(jobs_.begin(), jobs_.end(), [](const Job* a, const Job* b) { return a->id < b->id; });
    n_ = jobs_.size();
    for (std::size_t a = 0; a < n_; ++a) {
      twin_.push_back(-1);
      for (std::size_t b = 0; b < a; ++b) {
        if (jobs_[a]->release == jobs_[b]->release &&
            jobs_[a]->processing == jobs_[b]->processing &&
            jobs_[a]->weight == jobs_[b]->weight) {
          twin_[a] = static_cast<int>(b);
          break;
        }
      }
    }
  }

  std::vector<JobId> solve(std::vector<JobId> seed_order, const Rational& seed_objective) {
    best_ = seed_objective;
    best_order_ = std::move(seed_order);
    used_.assign(n_, false);
    order_.clear();
    dfs(Busy{}, Rational(0));
    return best_order_;
  }

 private:
  void dfs(const Busy& busy, const Rational& cost) {
    if (order_.size() == n_) {
      if (cost < best_) {
        best_ = cost;
        best_order_ = order_;
      }
      return;
    }
    struct Candidate {
      std::size_t index;
      Rational completion;
      Rational key;
    };
    std::vector<Candidate> cands;
    Rational bound = cost;
    for (std::size_t k = 0; k < n_; ++k) {
      if (used_[k]) continue;
      Rational c = completion_if_placed(busy, jobs_[k]->release, jobs_[k]->processing);
      bound += jobs_[k]->weight * c;
      if (twin_[k] >= 0 && !used_[twin_[k]]) continue;
      cands.push_back({k, c, jobs_[k]->weight / jobs_[k]->processing});
    }
    if (bound >= best_) return;
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.key > b.key; });
    for (const Candidate& c : cands) {
      const Job* j = jobs_[c.index];
      used_[c.index] = true;
      order_.push_back(j->id);
      dfs(place(busy, j->release, j->processing), cost + j->weight * c.completion);
      order_.pop_back();
      used_[c.index] = false;
    }
  }

  std::vector<const Job*> jobs_;
  std::vector<int> twin_;
  std::size_t n_ = 0;
  std::vector<bool> used_;
  std::vector<JobId> order_;
  std::vector<JobId> best_order_;
  Rational best_;
};

std::vector<JobId> ratio_order(const Instance& instance) {
  std::vector<const Job*> jobs;
  for (const Job& j : instance.jobs()) jobs.push_back(&j);
  std::sort(jobs.begin(), jobs.end(), [](const Job* a, const Job* b) {
    Rational ra = a->weight / a->processing;
    Rational rb = b->weight / b->processing;
    if (ra != rb) return ra > rb;
    if (a->processing != b->processing) return a->processing < b->processing;
    return a->id < b->id;
  });
  std::vector<JobId> out;
  for (const Job* j : jobs) out.push_back(j->id);
  return out;
}

}  // namespace

OptimalResult optimal_bruteforce(const Instance& instance, const BruteForceOptions& options) {
  if (instance.size() > options.max_n)
    throw Error(ErrorCode::kBudgetExceeded, "brute force limited to " +
                                                std::to_string(options.max_n) + " jobs, got " +
                                                std::to_string(instance.size()));
  std::vector<JobId> seed = ratio_order(instance);
  Schedule seed_schedule = priority_schedule(instance, seed);
  BranchAndBound bb(instance);
  std::vector<JobId> best = bb.solve(seed, objective(seed_schedule, instance));
  OptimalResult out;
  out.schedule = priority_schedule(instance, best);
  out.objective = objective(out.schedule, instance);
  out.method = "brute-force";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<long>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (long x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

class TimeIndexedDp {
 public:
  TimeIndexedDp(const Instance& instance, const Rational& grid, std::uint64_t budget)
      : budget_(budget) {
    if (grid <= 0) throw Error(ErrorCode::kInvalidArgument, "grid must be positive");
    for (const Job& j : instance.jobs()) jobs_.push_back(&j);
    std::sort(jobs_.begin(), jobs_.end(), [](const Job* a, const Job* b) { return a->id < b->id; });
    for (const Job* j : jobs_) {
      Rational r = j->release / grid;
      Rational p = j->processing / grid;
      if (r.get_den() != 1 || p.get_den() != 1)
        throw Error(ErrorCode::kInvalidArgument,
                    "job " + std::to_string(j->id) + " is not aligned to the grid");
      if (!r.get_num().fits_slong_p() || !p.get_num().fits_slong_p())
        throw Error(ErrorCode::kBudgetExceeded, "grid too fine");
      release_.push_back(r.get_num().get_si());
      length_.push_back(p.get_num().get_si());
    }
  }

  // Returns (objective in grid units, unit-step choices).
  std::pair<Rational, std::vector<std::pair<long, int>>> run() {
    std::vector<long> state(jobs_.size() + 1);
    state[0] = *std::min_element(release_.begin(), release_.end());
    for (std::size_t i = 0; i < jobs_.size(); ++i) state[i + 1] = length_[i];
    Rational value = solve(state);

    std::vector<std::pair<long, int>> steps;
    while (true) {
      const Entry& e = memo_.at(state);
      if (e.choice == kDone) break;
      if (e.choice == kIdle) {
        state[0] = e.next_time;
        continue;
      }
      steps.push_back({state[0], e.choice});
      state[e.choice + 1] -= 1;
      state[0] += 1;
    }
    return {value, steps};
  }

  const Job& job(int index) const { return *jobs_[index]; }

 private:
  static constexpr int kDone = -2;
  static constexpr int kIdle = -1;
  struct Entry {
    Rational value;
    int choice = kDone;
    long next_time = 0;
  };

  Rational solve(std::vector<long>& state) {
    if (auto it = memo_.find(state); it != memo_.end()) return it->second.value;
    if (memo_.size() >= budget_)
      throw Error(ErrorCode::kBudgetExceeded, "time-indexed DP exceeded its state budget");
    long t = state[0];
    bool any_left = false;
    long next_release = std::numeric_limits<long>::max();
    Entry best;
    bool found = false;
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      if (state[i + 1] == 0) continue;
      any_left = true;
      if (release_[i] > t) {
        next_release = std::min(next_release, release_[i]);
        continue;
      }
      state[i + 1] -= 1;
      state[0] = t + 1;
      Rational v = solve(state);
      state[0] = t;
      state[i + 1] += 1;
      if (state[i + 1] == 1) v += jobs_[i]->weight * (t + 1);
      if (!found || v < best.value) {
        best.value = v;
        best.choice = static_cast<int>(i);
        found = true;
      }
    }
    if (!any_left) {
      best.value = 0;
      best.choice = kDone;
    } else if (!found) {
      state[0] = next_release;
      best.value = solve(state);
      state[0] = t;
      best.choice = kIdle;
      best.next_time = next_release;
    }
    memo_.emplace(state, best);
    return best.value;
  }

  std::uint64_t budget_;
  std::vector<const Job*> jobs_;
  std::vector<long> release_;
  std::vector<long> length_;
  std::unordered_map<std::vector<long>, Entry, VecHash> memo_;
};

}  // namespace

OptimalResult optimal_dp_timeindexed(const Instance& instance, const Rational& grid,
                                     const DpOptions& options) {
  TimeIndexedDp dp(instance, grid, options.state_budget);
  auto [value, steps] = dp.run();
  std::vector<Slice> slices;
  for (const auto& [t, index] : steps)
    slices.push_back({dp.job(index).id, grid * t, grid * (t + 1)});
  OptimalResult out;
  out.schedule = Schedule(std::move(slices));
  out.objective = objective(out.schedule, instance);
  if (out.objective != value * grid)
    throw Error(ErrorCode::kInfeasible, "time-indexed DP reconstruction mismatch");
  out.method = "dp";
  return out;
}

OptimalResult structured_optimal(const Instance& instance) {
  if (!instance.tags())
    throw Error(ErrorCode::kNotGenerated, "structured_optimal needs a generated instance");
  OptimalResult out;
  out.schedule = priority_schedule(instance, ratio_order(instance));
  out.objective = objective(out.schedule, instance);
  out.method = "structured";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T pair_order_cost(const std::array<int, 3>& order, const T& p1, const T& p2, const T& release,
                  const T& ratio, const T& total, long pieces) {
  // Entities 0 = J1, 1 = J2, 2 = block. J1 and J2 are released at 0, so the
  // block is never interrupted once it starts and only its start matters.
  std::array<T, 3> rel{T(0), T(0), release};
  std::array<T, 3> rem{p1, p2, total};
  std::array<T, 3> done{T(0), T(0), T(0)};
  T block_start = -1;
  bool started = false;
  T t = 0;
  int left = total > 0 ? 3 : 2;
  if (total <= 0) rem[2] = 0;
  while (left > 0) {
    int pick = -1;
    for (int e : order)
      if (rem[e] > 0 && rel[e] <= t) {
        pick = e;
        break;
      }
    if (pick < 0) {
      t = release;
      continue;
    }
    if (pick == 2 && !started) {
      block_start = t;
      started = true;
    }
    T stop = t + rem[pick];
    bool finishes = true;
    if (rem[2] > 0 && rel[2] > t && rel[2] < stop) {
      stop = rel[2];
      finishes = false;
    }
    // Set rather than subtract so floating point cannot leave a residue.
    rem[pick] = finishes ? T(0) : T(rem[pick] - (stop - t));
    t = stop;
    if (finishes) {
      done[pick] = t;
      --left;
    }
  }
  T cost = p1 * done[0] + p2 * done[1];
  if (total > 0) {
    T tail = pieces > 0 ? T(total / (2 * T(pieces))) : T(0);
    cost += ratio * total * (block_start + total / 2 + tail);
  }
  return cost;
}

template <class T>
T pair_optimal(const T& p1, const T& p2, const T& release, const T& ratio, const T& total,
               long pieces) {
  std::array<int, 3> order{0, 1, 2};
  bool first = true;
  T best = 0;
  do {
    T c = pair_order_cost<T>(order, p1, p2, release, ratio, total, pieces);
    if (first || c < best) best = c;
    first = false;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

double closed_pair_optimal(double p1, double p2, double release, double ratio, double total,
                           long pieces) {
  if (p1 <= 0 || p2 <= 0 || release < 0 || total < 0 || pieces < 0)
    throw Error(ErrorCode::kDomain, "closed_pair_optimal: invalid parameters");
  return pair_optimal<double>(p1, p2, release, ratio, total, pieces);
}

Rational closed_pair_optimal(const Rational& p1, const Rational& p2, const Rational& release,
                             const Rational& ratio, const Rational& total, long pieces) {
  if (p1 <= 0 || p2 <= 0 || release < 0 || total < 0 || pieces < 0)
    throw Error(ErrorCode::kDomain, "closed_pair_optimal: invalid parameters");
  return pair_optimal<Rational>(p1, p2, release, ratio, total, pieces);
}

}  // namespace wsrpt
