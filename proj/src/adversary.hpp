#ifndef WSRPT_ADVERSARY_HPP_
#define WSRPT_ADVERSARY_HPP_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "simulator.hpp"

namespace wsrpt {

enum class Branch {
  kJ2Ran,       // J2 ran all of [0, p1]; block at p1, length l1
  kRatioAtP1,   // J2's Smith ratio already >= J1's at p1; block at p1
  kEqualized,   // Smith ratios meet at some t_s in (p1, p2]
  kTerminal,    // no equalization; block at p2
};

std::string to_string(Branch b);

struct Checkpoint {
  Rational t;
  Rational r1;  // remaining work of J1
  Rational r2;  // remaining work of J2
};

struct BranchState {
  Branch branch = Branch::kTerminal;
  double p1 = 1;
  double p2 = 2.3364;
  double release = 0;
  double r1 = 0;
  double r2 = 0;
  double prefix = 0;  // online cost of long jobs finished before the release
  double rho = 0;
};

/// Total block length the adversary releases: closed form l1 for kJ2Ran, l2
/// for a terminal state after J1-then-J2, otherwise the maximizer of the
/// best-response ratio over (0, 4 p2].
double choose_l(const BranchState& state);

struct AdversaryOptions {
  Rational p1{1};
  Rational p2 = make_rational(23364, 10000);
  Rational delta = make_rational(1, 1000);  // piece length, scaled by p1
};

struct AdversaryTranscript {
  std::string policy;
  Branch branch = Branch::kTerminal;
  Rational p1, p2;
  std::vector<Checkpoint> checkpoints;
  std::optional<Rational> t_s;
  Rational block_release;
  Rational block_ratio;
  Rational block_length;
  long pieces = 0;
  double chosen_l = 0;          // continuous length before rounding to pieces
  double continuous_ratio = 0;  // best-response ratio at chosen_l
  Instance instance;
  Schedule schedule;
  Rational online;
  Rational optimal;
  double ratio = 0;
};

/// Plays the two-long-job game against `policy`. The policy only sees jobs
/// as they are released.
AdversaryTranscript play(OnlinePolicy& policy, const AdversaryOptions& options = {});

std::string transcript_to_json(const AdversaryTranscript& t);

/// Runs `preferred` whenever it is available, otherwise WSRPT.
class PreferJobPolicy : public OnlinePolicy {
 public:
  explicit PreferJobPolicy(JobId preferred);
  std::string name() const override;
  void on_release(const AvailableJob& job) override;
  void on_update(const AvailableJob& job) override;
  void on_complete(JobId id) override;
  Decision decide(const MachineView& view) override;

 private:
  JobId preferred_;
  bool available_ = false;
  PriorityPolicy fallback_;
};

/// Runs the first released job until half of it is done, then the second
/// until half of it is done, then WSRPT. Against two long jobs this
/// equalizes their Smith ratios at (p1 + p2) / 2.
class EqualizerPolicy : public OnlinePolicy {
 public:
  EqualizerPolicy();
  std::string name() const override { return "equalizer"; }
  void on_release(const AvailableJob& job) override;
  void on_update(const AvailableJob& job) override;
  void on_complete(JobId id) override;
  Decision decide(const MachineView& view) override;

 private:
  std::vector<Job> first_two_;
  std::set<JobId> done_;
  PriorityPolicy fallback_;
};

/// "wsrpt" | "wspt" | "srpt" (with `tie`), "j2-first", "equalizer".
std::unique_ptr<OnlinePolicy> make_policy(const std::string& name, const TieRule& tie);

}  // namespace wsrpt

#endif  // WSRPT_ADVERSARY_HPP_
