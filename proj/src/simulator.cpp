#include "simulator.hpp"

#include <algorithm>
#include <unordered_map>

namespace wsrpt {

std::string to_string(Policy p) {
  switch (p) {
    case Policy::kWsrpt: return "wsrpt";
    case Policy::kWsptPreemptive: return "wspt";
    case Policy::kSrpt: return "srpt";
  }
  return "?";
}

std::string to_string(TieKind t) {
  switch (t) {
    case TieKind::kPreferRunning: return "prefer-running";
    case TieKind::kPreferNewLongest: return "prefer-new-longest";
    case TieKind::kPreferNewShortest: return "prefer-new-shortest";
    case TieKind::kScripted: return "scripted";
    case TieKind::kExhaustiveWorst: return "exhaustive-worst";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  if (name == "wsrpt") return Policy::kWsrpt;
  if (name == "wspt" || name == "wspt-preemptive") return Policy::kWsptPreemptive;
  if (name == "srpt") return Policy::kSrpt;
  throw Error(ErrorCode::kInvalidArgument, "unknown policy '" + name + "'");
}

TieKind parse_tie_kind(const std::string& name) {
  for (TieKind k : {TieKind::kPreferRunning, TieKind::kPreferNewLongest,
                    TieKind::kPreferNewShortest, TieKind::kScripted,
                    TieKind::kExhaustiveWorst})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::kInvalidArgument, "unknown tie rule '" + name + "'");
}

Rational policy_key(Policy policy, const Job& job, const Rational& remaining) {
  if (remaining <= 0) throw Error(ErrorCode::kDomain, "policy key of a finished job");
  Rational key;
  switch (policy) {
    case Policy::kWsrpt: key = job.weight / remaining; break;
    case Policy::kWsptPreemptive: key = job.weight / job.processing; break;
    case Policy::kSrpt: key = 1 / remaining; break;
  }
  return key;
}

// ---------------------------------------------------------------------------
// OnlineMachine

OnlineMachine::Record& OnlineMachine::record(JobId id) {
  auto it = records_.find(id);
  if (it == records_.end())
    throw Error(ErrorCode::kInvalidArgument, "job " + std::to_string(id) + " not released");
  return it->second;
}

std::vector<AvailableJob> OnlineMachine::available() const {
  std::vector<AvailableJob> out;
  out.reserve(available_.size());
  for (JobId id : available_) {
    const Record& r = records_.at(id);
    out.push_back({&r.job, r.remaining});
  }
  return out;
}

Rational OnlineMachine::remaining(JobId id) const {
  auto it = records_.find(id);
  if (it == records_.end())
    throw Error(ErrorCode::kInvalidArgument, "job " + std::to_string(id) + " not released");
  return it->second.remaining;
}

std::vector<Job> OnlineMachine::released_jobs() const {
  std::vector<Job> out;
  out.reserve(release_order_.size());
  for (JobId id : release_order_) out.push_back(records_.at(id).job);
  return out;
}

void OnlineMachine::release(const Job& job) {
  if (job.release != now_)
    throw Error(ErrorCode::kInvalidArgument, "release time must equal the machine clock");
  if (job.processing <= 0)
    throw Error(ErrorCode::kInvalidArgument, "job needs positive processing time");
  auto [it, fresh] = records_.emplace(job.id, Record{job, job.processing, false});
  if (!fresh) throw Error(ErrorCode::kInvalidArgument, "duplicate job id " + std::to_string(job.id));
  release_order_.push_back(job.id);
  available_.insert(job.id);
  policy_.on_release({&it->second.job, it->second.remaining});
  current_.reset();
}

void OnlineMachine::ensure_decision() {
  if (current_ || available_.empty()) return;
  if (last_run_ && last_run_stale_) {
    Record& r = record(*last_run_);
    policy_.on_update({&r.job, r.remaining});
    last_run_stale_ = false;
  }
  Decision d = policy_.decide(*this);
  ++decisions_;
  if (!available_.count(d.job))
    throw Error(ErrorCode::kInfeasible,
                policy_.name() + " chose unavailable job " + std::to_string(d.job));
  Record& r = record(d.job);
  Rational end = now_ + r.remaining;
  bool timed = false;
  if (d.until) {
    if (*d.until <= now_)
      throw Error(ErrorCode::kInfeasible, policy_.name() + " requested a non-positive slice");
    if (*d.until < end) {
      end = *d.until;
      timed = true;
    }
  }
  current_ = Current{d.job, end, timed};
}

void OnlineMachine::advance_to(const Rational& t) {
  if (t < now_) throw Error(ErrorCode::kInvalidArgument, "cannot move the clock backwards");
  while (now_ < t) {
    ensure_decision();
    if (!current_) {
      now_ = t;
      last_run_.reset();
      break;
    }
    JobId id = current_->job;
    Record& r = record(id);
    Rational stop = current_->segment_end < t ? current_->segment_end : t;
    slices_.push_back({id, now_, stop});
    r.remaining -= stop - now_;
    now_ = stop;
    last_run_ = id;
    last_run_stale_ = true;
    if (r.remaining == 0) {
      r.done = true;
      available_.erase(id);
      policy_.on_complete(id);
      current_.reset();
      last_run_.reset();
      last_run_stale_ = false;
    } else if (stop == current_->segment_end) {
      current_.reset();
    }
  }
}

void OnlineMachine::run_to_completion() {
  while (!available_.empty()) {
    ensure_decision();
    Rational end = current_->segment_end;
    advance_to(end);
  }
}

std::optional<Slice> OnlineMachine::peek() {
  ensure_decision();
  if (!current_) return std::nullopt;
  return Slice{current_->job, now_, current_->segment_end};
}

// ---------------------------------------------------------------------------
// PriorityPolicy

PriorityPolicy::PriorityPolicy(Policy policy, TieRule tie) : policy_(policy), tie_(std::move(tie)) {
  if (tie_.kind == TieKind::kExhaustiveWorst)
    throw Error(ErrorCode::kInvalidArgument, "exhaustive-worst is not an online tie rule");
  for (const TieChoice& c : tie_.script)
    if (!script_.emplace(c.t, c.choice).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "tie script has two entries at t=" + to_string(c.t));
}

std::string PriorityPolicy::name() const {
  return to_string(policy_) + "/" + to_string(tie_.kind);
}

void PriorityPolicy::on_release(const AvailableJob& job) {
  Rational key = policy_key(policy_, *job.job, job.remaining);
  order_.insert({key, job.job->id});
  key_of_[job.job->id] = key;
}

void PriorityPolicy::on_update(const AvailableJob& job) {
  auto it = key_of_.find(job.job->id);
  if (it == key_of_.end()) return;
  order_.erase({it->second, job.job->id});
  it->second = policy_key(policy_, *job.job, job.remaining);
  order_.insert({it->second, job.job->id});
}

void PriorityPolicy::on_complete(JobId id) {
  auto it = key_of_.find(id);
  if (it == key_of_.end()) return;
  order_.erase({it->second, id});
  key_of_.erase(it);
}

Decision PriorityPolicy::decide(const MachineView& view) {
  const Entry& top = *order_.begin();
  auto second = std::next(order_.begin());
  bool tie = second != order_.end() && second->key == top.key;
  if (!tie) return {top.id, std::nullopt};

  auto in_top = [&](JobId id) {
    auto it = key_of_.find(id);
    return it != key_of_.end() && it->second == top.key;
  };
  auto prefer_running = [&]() -> Decision {
    auto running = view.running();
    if (running && in_top(*running)) return {*running, std::nullopt};
    return {top.id, std::nullopt};
  };

  switch (tie_.kind) {
    case TieKind::kPreferRunning:
      return prefer_running();
    case TieKind::kScripted: {
      auto it = script_.find(view.now());
      if (it == script_.end()) return prefer_running();
      if (!in_top(it->second))
        throw Error(ErrorCode::kInvalidArgument,
                    "tie script picks job " + std::to_string(it->second) + " at t=" +
                        to_string(view.now()) + ", which is not among the tied jobs");
      return {it->second, std::nullopt};
    }
    case TieKind::kPreferNewLongest:
    case TieKind::kPreferNewShortest: {
      bool longest = tie_.kind == TieKind::kPreferNewLongest;
      auto running = view.running();
      std::optional<JobId> best;
      Rational best_rem;
      for (auto it = order_.begin(); it != order_.end() && it->key == top.key; ++it) {
        if (running && it->id == *running) continue;
        Rational rem = view.remaining(it->id);
        bool better = !best || (longest ? rem > best_rem : rem < best_rem);
        if (better) {
          best = it->id;
          best_rem = rem;
        }
      }
      return {*best, std::nullopt};
    }
    case TieKind::kExhaustiveWorst:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported tie rule");
}

// ---------------------------------------------------------------------------

Schedule simulate(const Instance& instance, Policy policy, const TieRule& tie,
                  const SimulateOptions& options) {
  if (tie.kind == TieKind::kExhaustiveWorst)
    return simulate_exhaustive_worst(instance, policy, options.branch_budget).schedule;

  std::vector<const Job*> order;
  for (const Job& j : instance.jobs()) order.push_back(&j);
  std::stable_sort(order.begin(), order.end(), [](const Job* a, const Job* b) {
    if (a->release != b->release) return a->release < b->release;
    return a->id < b->id;
  });
  PriorityPolicy pol(policy, tie);
  OnlineMachine machine(pol);
  for (const Job* j : order) {
    machine.advance_to(j->release);
    machine.release(*j);
  }
  machine.run_to_completion();
  return machine.schedule();
}

namespace {

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Instance& instance, Policy policy, std::uint64_t budget)
      : policy_(policy), budget_(budget) {
    for (const Job& j : instance.jobs()) jobs_.push_back(&j);
    std::sort(jobs_.begin(), jobs_.end(), [](const Job* a, const Job* b) { return a->id < b->id; });
  }

  ExhaustiveResult run() {
    std::vector<Rational> rem;
    Rational t = jobs_.front()->release;
    for (const Job* j : jobs_) {
      rem.push_back(j->processing);
      if (j->release < t) t = j->release;
    }
    std::vector<Rational> work = rem;
    Rational best = solve(t, work);

    std::vector<Slice> slices;
    while (true) {
      auto it = memo_.find(key(t, rem));
      if (it == memo_.end() || it->second.done) break;
      const Memo& m = it->second;
      if (m.choice >= 0) {
        slices.push_back({jobs_[m.choice]->id, t, m.stop});
        rem[m.choice] -= m.stop - t;
      }
      t = m.stop;
    }
    ExhaustiveResult out;
    out.schedule = Schedule(std::move(slices));
    out.objective = best;
    out.branches = branches_;
    return out;
  }

 private:
  struct Memo {
    Rational future;
    int choice = -1;
    Rational stop;
    bool done = false;
  };

  static std::string key(const Rational& t, const std::vector<Rational>& rem) {
    std::string k = t.get_str();
    for (const Rational& r : rem) {
      k.push_back('|');
      k += r.get_str();
    }
    return k;
  }

  Rational solve(const Rational& t, std::vector<Rational>& rem) {
    std::string k = key(t, rem);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second.future;

    std::vector<int> avail;
    std::optional<Rational> next_release;
    bool all_done = true;
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      if (rem[i] == 0) continue;
      all_done = false;
      if (jobs_[i]->release <= t) {
        avail.push_back(static_cast<int>(i));
      } else if (!next_release || jobs_[i]->release < *next_release) {
        next_release = jobs_[i]->release;
      }
    }
    if (all_done) {
      Memo m;
      m.done = true;
      memo_.emplace(k, m);
      return 0;
    }
    if (avail.empty()) {
      Rational f = solve(*next_release, rem);
      memo_.emplace(k, Memo{f, -1, *next_release, false});
      return f;
    }

    std::vector<Rational> keys;
    Rational top;
    for (std::size_t a = 0; a < avail.size(); ++a) {
      keys.push_back(policy_key(policy_, *jobs_[avail[a]], rem[avail[a]]));
      if (a == 0 || keys.back() > top) top = keys.back();
    }
    std::vector<int> tied;
    for (std::size_t a = 0; a < avail.size(); ++a)
      if (keys[a] == top) tied.push_back(avail[a]);

    std::optional<Memo> best;
    for (int c : tied) {
      if (tied.size() > 1 && ++branches_ > budget_)
        throw Error(ErrorCode::kBudgetExceeded, "exhaustive tie search exceeded its branch budget");
      Rational stop = t + rem[c];
      if (next_release && *next_release < stop) stop = *next_release;
      Rational saved = rem[c];
      rem[c] -= stop - t;
      Rational f = solve(stop, rem);
      if (rem[c] == 0) f += jobs_[c]->weight * stop;
      rem[c] = saved;
      if (!best || f > best->future) best = Memo{f, c, stop, false};
    }
    memo_.emplace(k, *best);
    return best->future;
  }

  Policy policy_;
  std::uint64_t budget_;
  std::uint64_t branches_ = 0;
  std::vector<const Job*> jobs_;
  std::unordered_map<std::string, Memo> memo_;
};

}  // namespace

ExhaustiveResult simulate_exhaustive_worst(const Instance& instance, Policy policy,
                                           std::uint64_t branch_budget) {
  ExhaustiveSearch search(instance, policy, branch_budget);
  return search.run();
}

// ---------------------------------------------------------------------------

EqualityReport is_equality_instance(const Instance& instance, const TieRule& tie) {
  EqualityReport report;
  std::map<Rational, std::vector<const Job*>> groups;
  for (const Job& j : instance.jobs()) groups[j.release].push_back(&j);

  TieRule online = tie;
  if (online.kind == TieKind::kExhaustiveWorst) online = TieRule::prefer_running();
  PriorityPolicy pol(Policy::kWsrpt, online);
  OnlineMachine machine(pol);
  for (const auto& [t, jobs] : groups) {
    machine.advance_to(t);
    Rational ratio = jobs.front()->weight / jobs.front()->processing;
    std::vector<JobId> ids;
    bool mutual = true;
    for (const Job* j : jobs) {
      ids.push_back(j->id);
      if (j->weight / j->processing != ratio) mutual = false;
    }
    if (!mutual) report.violations.push_back({t, ids, "released jobs differ in Smith ratio"});
    if (auto running = machine.running()) {
      const Job& r = instance.job(*running);
      Rational run_ratio = smith_ratio(r, machine.remaining(*running));
      if (mutual && run_ratio != ratio) {
        std::vector<JobId> with_running = ids;
        with_running.push_back(*running);
        report.violations.push_back(
            {t, with_running,
             "released ratio " + to_string(ratio) + " differs from running job's " +
                 to_string(run_ratio)});
      }
    }
    for (const Job* j : jobs) machine.release(*j);
  }
  report.pass = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Segment> segments(const Schedule& schedule, const Instance& instance) {
  auto slices = schedule.slices();
  std::map<JobId, std::size_t> first_slice;
  for (std::size_t i = 0; i < slices.size(); ++i) first_slice.emplace(slices[i].job, i);

  std::vector<Segment> flat;
  for (const auto& [id, idx] : first_slice) {
    const Job& opener = instance.job(id);
    if (slices[idx].start != opener.release) continue;
    Rational ratio = opener.weight / opener.processing;
    std::set<JobId> group{id};
    for (const Job& k : instance.jobs())
      if (k.id != id && k.release == opener.release && k.weight / k.processing == ratio)
        group.insert(k.id);

    Segment seg;
    seg.start = opener.release;
    seg.end = schedule.makespan();
    seg.opener = id;
    for (std::size_t i = idx + 1; i < slices.size(); ++i) {
      const Slice& s = slices[i];
      if (group.count(s.job)) continue;
      const Job& other = instance.job(s.job);
      if (other.weight / other.processing <= ratio) {
        seg.end = s.start;
        break;
      }
    }
    std::set<JobId> members;
    for (const Slice& s : slices)
      if (s.start >= seg.start && s.end <= seg.end) members.insert(s.job);
    seg.members.assign(members.begin(), members.end());
    flat.push_back(std::move(seg));
  }

  std::sort(flat.begin(), flat.end(), [](const Segment& a, const Segment& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end > b.end;
  });

  std::vector<Segment> roots;
  std::vector<Segment*> stack;
  for (Segment& seg : flat) {
    while (!stack.empty() && stack.back()->end <= seg.start) stack.pop_back();
    if (!stack.empty() && seg.end > stack.back()->end)
      throw Error(ErrorCode::kInfeasible, "segments overlap without nesting");
    seg.depth = static_cast<int>(stack.size());
    std::vector<Segment>& parent = stack.empty() ? roots : stack.back()->children;
    parent.push_back(std::move(seg));
    stack.push_back(&parent.back());
  }
  return roots;
}

Instance split_job(const Instance& instance, JobId id, int q) {
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "split factor must be at least 1");
  if (!instance.contains(id))
    throw Error(ErrorCode::kInvalidArgument, "unknown job id " + std::to_string(id));
  std::vector<Job> jobs;
  std::map<JobId, JobId> relabel;
  JobId next = 0;
  for (const Job& j : instance.jobs()) {
    relabel[j.id] = next;
    if (j.id != id) {
      Job copy = j;
      copy.id = next++;
      jobs.push_back(copy);
      continue;
    }
    for (int c = 0; c < q; ++c) {
      Job piece = j;
      piece.id = next++;
      piece.processing = j.processing / q;
      piece.weight = j.weight / q;
      jobs.push_back(piece);
    }
  }
  std::optional<TieScript> script = instance.tie_script();
  if (script)
    for (TieChoice& c : *script) c.choice = relabel.at(c.choice);
  return Instance(std::move(jobs), std::move(script));
}

}  // namespace wsrpt
