#ifndef WSRPT_SIMULATOR_HPP_
#define WSRPT_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"

namespace wsrpt {

enum class Policy { kWsrpt, kWsptPreemptive, kSrpt };

enum class TieKind {
  kPreferRunning,
  kPreferNewLongest,
  kPreferNewShortest,
  kScripted,
  kExhaustiveWorst,
};

struct TieRule {
  TieKind kind = TieKind::kPreferRunning;
  TieScript script;  // only for kScripted

  static TieRule prefer_running() { return {TieKind::kPreferRunning, {}}; }
  static TieRule scripted(TieScript s) { return {TieKind::kScripted, std::move(s)}; }
};

std::string to_string(Policy p);
std::string to_string(TieKind t);
Policy parse_policy(const std::string& name);
TieKind parse_tie_kind(const std::string& name);

/// Priority of a job under `policy`; larger runs first.
///   WSRPT:           weight / remaining
///   WSPT_PREEMPTIVE: weight / processing
///   SRPT:            1 / remaining
Rational policy_key(Policy policy, const Job& job, const Rational& remaining);

// ---------------------------------------------------------------------------
// Online machine. Jobs become visible to the policy only when released, so
// the same engine serves plain simulation and the adversary game.

struct AvailableJob {
  const Job* job = nullptr;
  Rational remaining;
};

class MachineView;

struct Decision {
  JobId job = 0;
  // Self-timed preemption point. The decision otherwise holds until the next
  // release or the job's completion.
  std::optional<Rational> until;
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  virtual std::string name() const = 0;
  virtual void on_release(const AvailableJob& job) = 0;
  // Remaining work of a job changed since the policy last saw it.
  virtual void on_update(const AvailableJob& job) = 0;
  virtual void on_complete(JobId id) = 0;
  virtual Decision decide(const MachineView& view) = 0;
};

class MachineView {
 public:
  virtual ~MachineView() = default;
  virtual const Rational& now() const = 0;
  // Job that executed right before now() and is not complete.
  virtual std::optional<JobId> running() const = 0;
  virtual std::vector<AvailableJob> available() const = 0;
  virtual Rational remaining(JobId id) const = 0;
};

class OnlineMachine : public MachineView {
 public:
  explicit OnlineMachine(OnlinePolicy& policy) : policy_(policy) {}

  const Rational& now() const override { return now_; }
  std::optional<JobId> running() const override { return last_run_; }
  std::vector<AvailableJob> available() const override;
  Rational remaining(JobId id) const override;

  // Makes `job` visible at now(); job.release must equal now().
  void release(const Job& job);
  void advance_to(const Rational& t);
  void run_to_completion();
  // The slice the machine would execute next, without executing it.
  std::optional<Slice> peek();

  bool has_available() const { return !available_.empty(); }
  std::size_t decisions() const { return decisions_; }
  Schedule schedule() const { return Schedule(slices_); }
  std::vector<Job> released_jobs() const;

 private:
  struct Record {
    Job job;
    Rational remaining;
    bool done = false;
  };
  struct Current {
    JobId job;
    Rational segment_end;
    bool timed;  // segment_end comes from Decision::until
  };

  void ensure_decision();
  Record& record(JobId id);

  OnlinePolicy& policy_;
  Rational now_ = 0;
  std::map<JobId, Record> records_;
  std::vector<JobId> release_order_;
  std::set<JobId> available_;
  std::optional<Current> current_;
  std::optional<JobId> last_run_;
  bool last_run_stale_ = false;
  std::vector<Slice> slices_;
  std::size_t decisions_ = 0;
};

/// Policy that runs the available job with the largest policy_key, resolving
/// ties by a TieRule (any kind except kExhaustiveWorst).
class PriorityPolicy : public OnlinePolicy {
 public:
  PriorityPolicy(Policy policy, TieRule tie);

  std::string name() const override;
  void on_release(const AvailableJob& job) override;
  void on_update(const AvailableJob& job) override;
  void on_complete(JobId id) override;
  Decision decide(const MachineView& view) override;

 private:
  struct Entry {
    Rational key;
    JobId id;
    bool operator<(const Entry& o) const {
      int c = cmp(key, o.key);
      if (c != 0) return c > 0;
      return id < o.id;
    }
  };

  Policy policy_;
  TieRule tie_;
  std::map<Rational, JobId> script_;
  std::set<Entry> order_;
  std::map<JobId, Rational> key_of_;
};

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::uint64_t branch_budget = std::uint64_t{1} << 20;
};

/// Event-driven preemptive simulation; deterministic for fixed inputs.
Schedule simulate(const Instance& instance, Policy policy, const TieRule& tie,
                  const SimulateOptions& options = {});

struct ExhaustiveResult {
  Schedule schedule;
  Rational objective;
  std::uint64_t branches = 0;
};

/// Explores every tie resolution and returns the schedule with the largest
/// objective. Equal objectives keep the first branch in ascending job id.
ExhaustiveResult simulate_exhaustive_worst(const Instance& instance, Policy policy,
                                           std::uint64_t branch_budget);

struct EqualityViolation {
  Rational t;
  std::vector<JobId> jobs;
  std::string reason;
};

struct EqualityReport {
  bool pass = true;
  std::vector<EqualityViolation> violations;
};

EqualityReport is_equality_instance(const Instance& instance, const TieRule& tie);

struct Segment {
  Rational start;
  Rational end;
  JobId opener = 0;
  std::vector<JobId> members;  // jobs with any execution inside [start, end)
  int depth = 0;
  std::vector<Segment> children;
};

/// Nested segment forest of a WSRPT schedule.
std::vector<Segment> segments(const Schedule& schedule, const Instance& instance);

/// Replaces job `id` by q copies with processing p/q, weight w/q and the same
/// release. Ids are relabelled densely in job order.
Instance split_job(const Instance& instance, JobId id, int q);

}  // namespace wsrpt

#endif  // WSRPT_SIMULATOR_HPP_
