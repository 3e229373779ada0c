#include "adversary.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "analysis.hpp"
#include "instances.hpp"
#include "oracle.hpp"

namespace wsrpt {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::kJ2Ran: return "j2-ran";
    case Branch::kRatioAtP1: return "ratio-at-p1";
    case Branch::kEqualized: return "equalized";
    case Branch::kTerminal: return "terminal";
  }
  return "?";
}

double choose_l(const BranchState& s) {
  if (s.branch == Branch::kJ2Ran) return lb_l1(s.p1, s.p2);
  if (s.branch == Branch::kTerminal && s.r1 == 0 && std::abs(s.r2 - s.p1) < 1e-12)
    return lb_l2(s.p1, s.p2);
  return best_block(s.p1, s.p2, s.release, s.r1, s.r2, s.prefix, s.rho).l;
}

AdversaryTranscript play(OnlinePolicy& policy, const AdversaryOptions& options) {
  const Rational& p1 = options.p1;
  const Rational& p2 = options.p2;
  if (!(p1 > 0 && p2 > p1)) throw Error(ErrorCode::kInvalidArgument, "need p2 > p1 > 0");
  if (options.delta <= 0) throw Error(ErrorCode::kInvalidArgument, "need delta > 0");

  AdversaryTranscript out;
  out.policy = policy.name();
  out.p1 = p1;
  out.p2 = p2;

  OnlineMachine m(policy);
  m.release({0, 0, p1, p1});
  m.release({1, 0, p2, p2});
  auto checkpoint = [&]() { out.checkpoints.push_back({m.now(), m.remaining(0), m.remaining(1)}); };

  m.advance_to(p1);
  checkpoint();
  Rational r1 = m.remaining(0);
  Rational r2 = m.remaining(1);
  if (r2 == p2 - p1) {
    out.branch = Branch::kJ2Ran;
  } else if (r1 > 0 && p2 * r1 >= p1 * r2) {
    out.branch = Branch::kRatioAtP1;
  } else {
    // Wait for p2 / p2(t) = p1 / p1(t). Remainders are linear inside a slice,
    // so the meeting point is an exact rational.
    while (m.now() < p2) {
      r1 = m.remaining(0);
      r2 = m.remaining(1);
      if (r1 == 0) break;
      std::optional<Slice> next = m.peek();
      if (!next) break;
      Rational end = next->end < p2 ? next->end : p2;
      std::optional<Rational> meet;
      if (next->job == 1) meet = m.now() + r2 - r1 * p2 / p1;
      if (next->job == 0) meet = m.now() + r1 - r2 * p1 / p2;
      if (meet && *meet > m.now() && *meet <= end) {
        m.advance_to(*meet);
        out.t_s = *meet;
        break;
      }
      m.advance_to(end);
    }
    if (out.t_s) {
      out.branch = Branch::kEqualized;
    } else {
      m.advance_to(p2);
      out.branch = Branch::kTerminal;
    }
    checkpoint();
    r1 = m.remaining(0);
    r2 = m.remaining(1);
  }
  if (r2 == 0) throw Error(ErrorCode::kInfeasible, "J2 finished before the block release");

  out.block_release = m.now();
  out.block_ratio = p2 / r2;

  Schedule prefix_schedule = m.schedule();
  Rational prefix = 0;
  if (r1 == 0) prefix += p1 * prefix_schedule.completion(0);

  BranchState state;
  state.branch = out.branch;
  state.p1 = to_double(p1);
  state.p2 = to_double(p2);
  state.release = to_double(out.block_release);
  state.r1 = to_double(r1);
  state.r2 = to_double(r2);
  state.prefix = to_double(prefix);
  state.rho = to_double(out.block_ratio);
  out.chosen_l = choose_l(state);
  out.continuous_ratio = best_response_ratio(state.p1, state.p2, state.release, state.r1, state.r2,
                                             state.prefix, state.rho, out.chosen_l);

  Rational piece = options.delta * p1;
  out.pieces = std::max(1L, std::lround(out.chosen_l / to_double(piece)));
  out.block_length = piece * out.pieces;
  for (long i = 0; i < out.pieces; ++i)
    m.release({static_cast<JobId>(2 + i), out.block_release, piece, out.block_ratio * piece});
  m.run_to_completion();

  out.instance = Instance(m.released_jobs());
  out.schedule = m.schedule();
  out.schedule.validate(out.instance);
  out.online = objective(out.schedule, out.instance);
  out.optimal = closed_pair_optimal(p1, p2, out.block_release, out.block_ratio, out.block_length,
                                    out.pieces);
  out.ratio = to_double(out.online) / to_double(out.optimal);
  return out;
}

std::string transcript_to_json(const AdversaryTranscript& t) {
  using nlohmann::json;
  json doc;
  doc["policy"] = t.policy;
  doc["branch"] = to_string(t.branch);
  doc["p1"] = to_string(t.p1);
  doc["p2"] = to_string(t.p2);
  doc["checkpoints"] = json::array();
  for (const Checkpoint& c : t.checkpoints)
    doc["checkpoints"].push_back(
        {{"t", to_string(c.t)}, {"r1", to_string(c.r1)}, {"r2", to_string(c.r2)}});
  doc["t_s"] = t.t_s ? json(to_string(*t.t_s)) : json(nullptr);
  doc["block"] = {{"release", to_string(t.block_release)},
                  {"ratio", to_string(t.block_ratio)},
                  {"length", to_string(t.block_length)},
                  {"pieces", t.pieces},
                  {"chosen_l", t.chosen_l}};
  doc["continuous_ratio"] = t.continuous_ratio;
  doc["online"] = to_string(t.online);
  doc["optimal"] = to_string(t.optimal);
  doc["ratio"] = t.ratio;
  doc["instance"] = json::parse(instance_to_json(t.instance));
  doc["schedule"] = json::parse(schedule_to_json(t.schedule))["slices"];
  return doc.dump(1);
}

// ---------------------------------------------------------------------------

PreferJobPolicy::PreferJobPolicy(JobId preferred)
    : preferred_(preferred), fallback_(Policy::kWsrpt, TieRule::prefer_running()) {}

std::string PreferJobPolicy::name() const { return "prefer-job-" + std::to_string(preferred_); }

void PreferJobPolicy::on_release(const AvailableJob& job) {
  if (job.job->id == preferred_) available_ = true;
  fallback_.on_release(job);
}

void PreferJobPolicy::on_update(const AvailableJob& job) { fallback_.on_update(job); }

void PreferJobPolicy::on_complete(JobId id) {
  if (id == preferred_) available_ = false;
  fallback_.on_complete(id);
}

Decision PreferJobPolicy::decide(const MachineView& view) {
  if (available_) return {preferred_, std::nullopt};
  return fallback_.decide(view);
}

EqualizerPolicy::EqualizerPolicy() : fallback_(Policy::kWsrpt, TieRule::prefer_running()) {}

void EqualizerPolicy::on_release(const AvailableJob& job) {
  if (first_two_.size() < 2) first_two_.push_back(*job.job);
  fallback_.on_release(job);
}

void EqualizerPolicy::on_update(const AvailableJob& job) { fallback_.on_update(job); }

void EqualizerPolicy::on_complete(JobId id) {
  done_.insert(id);
  fallback_.on_complete(id);
}

Decision EqualizerPolicy::decide(const MachineView& view) {
  for (const Job& j : first_two_) {
    if (done_.count(j.id)) continue;
    Rational rem = view.remaining(j.id);
    Rational half = j.processing / 2;
    if (rem > half) return {j.id, Rational(view.now() + rem - half)};
  }
  return fallback_.decide(view);
}

std::unique_ptr<OnlinePolicy> make_policy(const std::string& name, const TieRule& tie) {
  if (name == "j2-first") return std::make_unique<PreferJobPolicy>(1);
  if (name == "equalizer") return std::make_unique<EqualizerPolicy>();
  return std::make_unique<PriorityPolicy>(parse_policy(name), tie);
}

}  // namespace wsrpt
