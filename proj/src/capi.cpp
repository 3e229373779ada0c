#include "wsrpt/wsrpt.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "adversary.hpp"
#include "analysis.hpp"
#include "instances.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "simulator.hpp"

struct wsrpt_instance {
  wsrpt::Instance value;
};

struct wsrpt_schedule {
  wsrpt::Schedule value;
};

namespace {

using namespace wsrpt;

thread_local std::string g_last_error;

wsrpt_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return WSRPT_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return WSRPT_ERR_PARSE;
    case ErrorCode::kIo: return WSRPT_ERR_IO;
    case ErrorCode::kBudgetExceeded: return WSRPT_ERR_BUDGET_EXCEEDED;
    case ErrorCode::kDomain: return WSRPT_ERR_DOMAIN;
    case ErrorCode::kNotGenerated: return WSRPT_ERR_NOT_GENERATED;
    case ErrorCode::kInfeasible: return WSRPT_ERR_INFEASIBLE;
  }
  return WSRPT_ERR_INTERNAL;
}

template <class F>
wsrpt_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return WSRPT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WSRPT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WSRPT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ScenarioParams scenario(const wsrpt_scenario* p) {
  need(p, "scenario");
  need(p->y, "scenario.y");
  ScenarioParams out;
  out.y = parse_rational(p->y);
  if (p->v) out.v = parse_rational(p->v);
  if (p->z) out.z = parse_rational(p->z);
  if (p->delta) out.delta = parse_rational(p->delta);
  return out;
}

TieRule tie_rule(const Instance& inst, const char* tie) {
  TieRule rule;
  if (!tie) tie = inst.tie_script() ? "scripted" : "prefer-running";
  rule.kind = parse_tie_kind(tie);
  if (rule.kind == TieKind::kScripted) {
    if (!inst.tie_script())
      throw Error(ErrorCode::kInvalidArgument, "tie rule 'scripted' needs an instance tie script");
    rule.script = *inst.tie_script();
  }
  return rule;
}

Rational auto_grid(const Instance& inst) {
  mpz_class l = 1;
  for (const Job& j : inst.jobs()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), j.release.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), j.processing.get_den_mpz_t());
  }
  return Rational(mpz_class(1), l);
}

nlohmann::json segment_json(const Segment& s) {
  nlohmann::json out = {{"start", to_string(s.start)},
                        {"end", to_string(s.end)},
                        {"opener", s.opener},
                        {"depth", s.depth},
                        {"members", s.members},
                        {"children", nlohmann::json::array()}};
  for (const Segment& c : s.children) out["children"].push_back(segment_json(c));
  return out;
}

}  // namespace

extern "C" {

const char* wsrpt_last_error(void) { return g_last_error.c_str(); }
const char* wsrpt_version(void) { return "1.0.0"; }
void wsrpt_string_free(char* s) { std::free(s); }

wsrpt_status wsrpt_instance_read(const char* path, wsrpt_instance** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wsrpt_instance{read_instance(path)};
  });
}

wsrpt_status wsrpt_instance_from_json(const char* json, wsrpt_instance** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new wsrpt_instance{instance_from_json(json)};
  });
}

wsrpt_status wsrpt_instance_write(const wsrpt_instance* inst, const char* path) {
  return guard([&] {
    need(inst, "instance");
    need(path, "path");
    write_instance(inst->value, path);
  });
}

wsrpt_status wsrpt_instance_to_json(const wsrpt_instance* inst, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(instance_to_json(inst->value));
  });
}

size_t wsrpt_instance_size(const wsrpt_instance* inst) { return inst ? inst->value.size() : 0; }

void wsrpt_instance_free(wsrpt_instance* inst) { delete inst; }

wsrpt_status wsrpt_normalize_releases(const wsrpt_instance* inst, wsrpt_instance** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    *out = new wsrpt_instance{normalize_releases(inst->value)};
  });
}

wsrpt_status wsrpt_split_job(const wsrpt_instance* inst, int job, int q, wsrpt_instance** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    *out = new wsrpt_instance{split_job(inst->value, job, q)};
  });
}

void wsrpt_random_ranges_default(wsrpt_random_ranges* out) {
  if (!out) return;
  RandomRanges r;
  *out = {r.max_release, r.max_processing, r.max_weight, r.denominator, r.unit_weight ? 1 : 0,
          r.zero_release ? 1 : 0};
}

wsrpt_status wsrpt_gen_basic(const wsrpt_scenario* params, wsrpt_instance** out) {
  return guard([&] {
    need(out, "out");
    *out = new wsrpt_instance{gen_basic(scenario(params))};
  });
}

wsrpt_status wsrpt_gen_nested(const wsrpt_scenario* outer, const wsrpt_scenario* inner,
                              const char* r_s, const char* p_s, wsrpt_instance** out) {
  return guard([&] {
    need(out, "out");
    NestedParams p;
    p.outer = scenario(outer);
    p.inner = scenario(inner);
    if (r_s) p.r_s = parse_rational(r_s);
    if (p_s) p.p_s = parse_rational(p_s);
    *out = new wsrpt_instance{gen_nested(p)};
  });
}

wsrpt_status wsrpt_gen_random(int n, uint64_t seed, const wsrpt_random_ranges* ranges,
                              wsrpt_instance** out) {
  return guard([&] {
    need(out, "out");
    RandomRanges r;
    if (ranges) {
      r.max_release = ranges->max_release;
      r.max_processing = ranges->max_processing;
      r.max_weight = ranges->max_weight;
      r.denominator = ranges->denominator;
      r.unit_weight = ranges->unit_weight != 0;
      r.zero_release = ranges->zero_release != 0;
    }
    *out = new wsrpt_instance{gen_random(n, seed, r)};
  });
}

wsrpt_status wsrpt_simulate(const wsrpt_instance* inst, const char* policy, const char* tie,
                            uint64_t branch_budget, wsrpt_schedule** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    SimulateOptions opts;
    if (branch_budget) opts.branch_budget = branch_budget;
    Policy pol = policy ? parse_policy(policy) : Policy::kWsrpt;
    *out = new wsrpt_schedule{simulate(inst->value, pol, tie_rule(inst->value, tie), opts)};
  });
}

wsrpt_status wsrpt_is_equality_instance(const wsrpt_instance* inst, const char* tie, int* pass,
                                        char** report_json) {
  return guard([&] {
    need(inst, "instance");
    EqualityReport rep = is_equality_instance(inst->value, tie_rule(inst->value, tie));
    if (pass) *pass = rep.pass ? 1 : 0;
    if (report_json) {
      nlohmann::json doc = {{"pass", rep.pass}, {"violations", nlohmann::json::array()}};
      for (const EqualityViolation& v : rep.violations)
        doc["violations"].push_back({{"t", to_string(v.t)}, {"jobs", v.jobs}, {"reason", v.reason}});
      *report_json = dup(doc.dump(1));
    }
  });
}

wsrpt_status wsrpt_segments_json(const wsrpt_schedule* sched, const wsrpt_instance* inst,
                                 char** out) {
  return guard([&] {
    need(sched, "schedule");
    need(inst, "instance");
    need(out, "out");
    nlohmann::json doc = nlohmann::json::array();
    for (const Segment& s : segments(sched->value, inst->value)) doc.push_back(segment_json(s));
    *out = dup(doc.dump(1));
  });
}

wsrpt_status wsrpt_optimal(const wsrpt_instance* inst, const char* method, const char* grid,
                           wsrpt_schedule** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    std::string m = method ? method : "brute";
    OptimalResult r;
    if (m == "brute") {
      r = optimal_bruteforce(inst->value);
    } else if (m == "dp") {
      r = optimal_dp_timeindexed(inst->value, grid ? parse_rational(grid) : auto_grid(inst->value));
    } else if (m == "structured") {
      r = structured_optimal(inst->value);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown optimal method '" + m + "'");
    }
    *out = new wsrpt_schedule{r.schedule};
  });
}

wsrpt_status wsrpt_schedule_from_json(const char* json, wsrpt_schedule** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new wsrpt_schedule{schedule_from_json(json)};
  });
}

wsrpt_status wsrpt_schedule_to_json(const wsrpt_schedule* sched, char** out) {
  return guard([&] {
    need(sched, "schedule");
    need(out, "out");
    *out = dup(schedule_to_json(sched->value));
  });
}

wsrpt_status wsrpt_schedule_to_csv(const wsrpt_schedule* sched, char** out) {
  return guard([&] {
    need(sched, "schedule");
    need(out, "out");
    *out = dup(schedule_to_csv(sched->value));
  });
}

wsrpt_status wsrpt_schedule_validate(const wsrpt_schedule* sched, const wsrpt_instance* inst) {
  return guard([&] {
    need(sched, "schedule");
    need(inst, "instance");
    sched->value.validate(inst->value);
  });
}

void wsrpt_schedule_free(wsrpt_schedule* sched) { delete sched; }

wsrpt_status wsrpt_objective(const wsrpt_schedule* sched, const wsrpt_instance* inst, char** exact,
                             double* value) {
  return guard([&] {
    need(sched, "schedule");
    need(inst, "instance");
    Rational obj = objective(sched->value, inst->value);
    if (value) *value = to_double(obj);
    if (exact) *exact = dup(to_string(obj));
  });
}

wsrpt_status wsrpt_profile_metrics(double y, const double* v, const double* z, wsrpt_metrics* out) {
  return guard([&] {
    need(out, "out");
    std::optional<double> vo, zo;
    if (v) vo = *v;
    if (z) zo = *z;
    ScenarioMetrics m = profile_metrics(y, vo, zo);
    *out = {m.C, m.C_star, m.ratio, m.W, m.L};
  });
}

wsrpt_status wsrpt_table1_csv(char** out, double* max_delta) {
  return guard([&] {
    std::vector<Table1Result> rows = reproduce_table1();
    if (max_delta) {
      *max_delta = 0;
      for (const Table1Result& r : rows) *max_delta = std::max(*max_delta, r.max_delta);
    }
    if (out) *out = dup(table1_csv(rows));
  });
}

wsrpt_status wsrpt_optimize_basic(double* y, double* v, double* ratio) {
  return guard([&] {
    BasicOptimum o = optimize_basic();
    if (y) *y = o.y;
    if (v) *v = o.v;
    if (ratio) *ratio = o.ratio;
  });
}

wsrpt_status wsrpt_nested_optimum(double r_s, double* p_s, double* ratio) {
  return guard([&] {
    BasicOptimum b = optimize_basic();
    NestedOptimum o = optimize_nested_ps(r_s, profile_metrics(b.y, b.v));
    if (p_s) *p_s = o.p_s;
    if (ratio) *ratio = o.ratio;
  });
}

wsrpt_status wsrpt_lb_c1(double p1, double p2, double* out) {
  return guard([&] {
    need(out, "out");
    *out = lb_c1(p1, p2);
  });
}

wsrpt_status wsrpt_optimize_lb(double* p2, double* ratio) {
  return guard([&] {
    LbOptimum o = optimize_lb();
    if (p2) *p2 = o.p2;
    if (ratio) *ratio = o.ratio;
  });
}

wsrpt_status wsrpt_curves_csv(double p2_min, double p2_max, int points, char** out) {
  return guard([&] {
    need(out, "out");
    std::ostringstream os;
    os.precision(8);
    os << "p2,j1_first,j2_first\n";
    for (const LbCurvePoint& p : lb_curves(p2_min, p2_max, points))
      os << p.p2 << ',' << p.j1_first << ',' << p.j2_first << '\n';
    *out = dup(os.str());
  });
}

wsrpt_status wsrpt_adversary_play(const char* policy, const char* tie, const char* delta,
                                  const char* p1, const char* p2, char** transcript_json,
                                  double* ratio) {
  return guard([&] {
    TieRule rule;
    rule.kind = tie ? parse_tie_kind(tie) : TieKind::kPreferRunning;
    if (rule.kind == TieKind::kScripted || rule.kind == TieKind::kExhaustiveWorst)
      throw Error(ErrorCode::kInvalidArgument, "the adversary needs an online tie rule");
    std::unique_ptr<OnlinePolicy> pol = make_policy(policy ? policy : "wsrpt", rule);
    AdversaryOptions opts;
    if (delta) opts.delta = parse_rational(delta);
    if (p1) opts.p1 = parse_rational(p1);
    if (p2) opts.p2 = parse_rational(p2);
    AdversaryTranscript t = play(*pol, opts);
    if (ratio) *ratio = t.ratio;
    if (transcript_json) *transcript_json = dup(transcript_to_json(t));
  });
}

wsrpt_status wsrpt_fuzz(const wsrpt_fuzz_options* options, wsrpt_fuzz_report* out,
                        char** report_json) {
  return guard([&] {
    need(options, "options");
    FuzzOptions o;
    o.trials = options->trials;
    o.n_max = options->n_max;
    o.seed = options->seed;
    o.threads = options->threads;
    if (options->certificate_path) o.certificate_path = options->certificate_path;
    FuzzReport r = fuzz(o);
    if (out) {
      out->trials = r.trials;
      out->skipped = r.skipped;
      out->worst_ratio = to_double(r.worst_ratio);
      out->ok = r.ok ? 1 : 0;
      for (int c = 0; c < 3; ++c) {
        out->class_trials[c] = r.classes[c].trials;
        out->class_not_one[c] = r.classes[c].not_one;
        out->class_max[c] = r.classes[c].max_ratio;
      }
    }
    if (report_json) *report_json = dup(fuzz_report_json(r));
  });
}

wsrpt_status wsrpt_render_gantt(const wsrpt_schedule* sched, const wsrpt_instance* inst,
                                const char* path) {
  return guard([&] {
    need(sched, "schedule");
    need(inst, "instance");
    need(path, "path");
    write_text_file(path, render_gantt(sched->value, inst->value));
  });
}

wsrpt_status wsrpt_render_profile(const wsrpt_schedule* sched, const wsrpt_instance* inst,
                                  const char* path) {
  return guard([&] {
    need(sched, "schedule");
    need(inst, "instance");
    need(path, "path");
    write_text_file(path, render_profile(sched->value, inst->value));
  });
}

}  // extern "C"
