// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wsrpt/wsrpt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAssertion = 2;

struct Failure {
  int code;
  std::string message;
};

void check(wsrpt_status s) {
  if (s != WSRPT_OK) throw Failure{kExitValidation, wsrpt_last_error()};
}

// Owned C string from the library.
struct Text {
  char* p = nullptr;
  ~Text() { wsrpt_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct InstanceHandle {
  wsrpt_instance* p = nullptr;
  ~InstanceHandle() { wsrpt_instance_free(p); }
};

struct ScheduleHandle {
  wsrpt_schedule* p = nullptr;
  ~ScheduleHandle() { wsrpt_schedule_free(p); }
};

struct Globals {
  std::string out;
  std::uint64_t seed = 1;
  bool exact = true;
};

std::string resolve(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("WSRPT_OUT_DIR"); dir && *dir) {
      std::filesystem::create_directories(dir);
      return (std::filesystem::path(dir) / p).string();
    }
  }
  return path;
}

void emit(const std::string& path, const std::string& text) {
  std::string target = resolve(path);
  if (target.empty() || target == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(target, std::ios::binary);
  if (!f) throw Failure{kExitValidation, "cannot write '" + target + "'"};
  f << text;
  std::cerr << "wrote " << target << "\n";
}

void load(const std::string& path, InstanceHandle& inst) { check(wsrpt_instance_read(path.c_str(), &inst.p)); }

std::string objective_text(const ScheduleHandle& s, const InstanceHandle& i, bool exact) {
  Text t;
  double v = 0;
  check(wsrpt_objective(s.p, i.p, &t.p, &v));
  if (exact) return t.str() + " (" + std::to_string(v) + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const char* opt_c(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WSRPT scheduling workbench"};
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file mirroring the flags");
  Globals g;
  app.add_option("--out,-o", g.out, "Output path (default stdout; relative paths honour WSRPT_OUT_DIR)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_flag("--exact,!--float", g.exact, "Print exact rationals (default) or floats");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate an online policy on an instance");
  std::string sim_instance, sim_policy = "wsrpt", sim_csv;
  std::optional<std::string> sim_tie;
  std::uint64_t sim_budget = 0;
  sim->add_option("--instance", sim_instance)->required();
  sim->add_option("--policy", sim_policy);
  sim->add_option("--tie", sim_tie, "prefer-running|prefer-new-longest|prefer-new-shortest|scripted|exhaustive-worst "
                  "(default: scripted if the instance has a script)");
  sim->add_option("--budget", sim_budget, "Tie branch budget for exhaustive-worst");
  sim->add_option("--csv", sim_csv, "Also write the schedule as CSV");

  // optimal
  auto* opt = app.add_subcommand("optimal", "Compute an optimal schedule");
  std::string opt_instance, opt_method = "brute";
  std::optional<std::string> opt_grid;
  opt->add_option("--instance", opt_instance)->required();
  opt->add_option("--method", opt_method)->check(CLI::IsMember({"brute", "dp", "structured"}));
  opt->add_option("--grid", opt_grid);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  auto* gen_b = gen->add_subcommand("basic", "Basic worst-case scenario");
  std::string gb_y, gb_delta = "1/1000";
  std::optional<std::string> gb_v, gb_z;
  gen_b->add_option("--y", gb_y)->required();
  gen_b->add_option("--v", gb_v);
  gen_b->add_option("--z", gb_z);
  gen_b->add_option("--delta", gb_delta);
  auto* gen_n = gen->add_subcommand("nested", "Nested scenario");
  std::string gn_y = "0.8157", gn_delta = "1/1000";
  std::optional<std::string> gn_v = std::string("0.7066"), gn_z, gn_iy, gn_iv, gn_iz, gn_rs, gn_ps;
  gen_n->add_option("--y", gn_y);
  gen_n->add_option("--v", gn_v);
  gen_n->add_option("--z", gn_z);
  gen_n->add_option("--inner-y", gn_iy, "Defaults to the outer value");
  gen_n->add_option("--inner-v", gn_iv);
  gen_n->add_option("--inner-z", gn_iz);
  gen_n->add_option("--r-s", gn_rs);
  gen_n->add_option("--p-s", gn_ps);
  gen_n->add_option("--delta", gn_delta);
  auto* gen_r = gen->add_subcommand("random", "Random instance");
  int gr_n = 6;
  wsrpt_random_ranges gr_ranges;
  wsrpt_random_ranges_default(&gr_ranges);
  bool gr_unit = false, gr_zero = false;
  gen_r->add_option("--n", gr_n);
  gen_r->add_option("--max-release", gr_ranges.max_release);
  gen_r->add_option("--max-processing", gr_ranges.max_processing);
  gen_r->add_option("--max-weight", gr_ranges.max_weight);
  gen_r->add_option("--denominator", gr_ranges.denominator);
  gen_r->add_flag("--unit-weight", gr_unit);
  gen_r->add_flag("--zero-release", gr_zero);

  // table1
  auto* tab = app.add_subcommand("table1", "Reproduce the ratio table as CSV");

  // optimize
  auto* optz = app.add_subcommand("optimize", "Numerical optimizations");
  std::string optz_what;
  optz->add_option("what", optz_what)->required()->check(CLI::IsMember({"basic", "lb", "nested"}));
  double optz_rs = 0.5307;
  optz->add_option("--r-s", optz_rs, "Release of the inner long job (nested)");

  // curves
  auto* cur = app.add_subcommand("curves", "Lower-bound curves as CSV");
  double cur_lo = 1.5, cur_hi = 4.0;
  int cur_points = 101;
  cur->add_option("--p2-min", cur_lo);
  cur->add_option("--p2-max", cur_hi);
  cur->add_option("--points", cur_points);

  // adversary
  auto* adv = app.add_subcommand("adversary", "Play the lower-bound game against a policy");
  std::string adv_policy = "wsrpt", adv_tie = "prefer-running";
  std::optional<std::string> adv_delta, adv_p1, adv_p2;
  adv->add_option("--policy", adv_policy, "wsrpt|wspt|srpt|j2-first|equalizer");
  adv->add_option("--tie", adv_tie);
  adv->add_option("--delta", adv_delta);
  adv->add_option("--p1", adv_p1);
  adv->add_option("--p2", adv_p2);

  // fuzz
  auto* fz = app.add_subcommand("fuzz", "Random search for bad WSRPT ratios");
  wsrpt_fuzz_options fz_opts{10000, 7, 1, 0, nullptr};
  std::string fz_cert = "fuzz_certificate.json";
  fz->add_option("--trials", fz_opts.trials);
  fz->add_option("--n-max", fz_opts.n_max);
  fz->add_option("--threads", fz_opts.threads);
  fz->add_option("--certificate", fz_cert);

  // render
  auto* ren = app.add_subcommand("render", "Render a schedule as SVG");
  std::string ren_instance, ren_kind = "gantt", ren_policy = "wsrpt";
  std::optional<std::string> ren_tie;
  std::optional<std::string> ren_schedule;
  ren->add_option("--instance", ren_instance)->required();
  ren->add_option("--schedule", ren_schedule, "Schedule JSON; otherwise simulate");
  ren->add_option("--kind", ren_kind)->check(CLI::IsMember({"gantt", "profile"}));
  ren->add_option("--policy", ren_policy);
  ren->add_option("--tie", ren_tie);

  // equality
  auto* eq = app.add_subcommand("equality", "Check the equal-Smith-ratio release property");
  std::string eq_instance;
  std::optional<std::string> eq_tie;
  eq->add_option("--instance", eq_instance)->required();
  eq->add_option("--tie", eq_tie);

  // split
  auto* sp = app.add_subcommand("split", "Split one job into q equal pieces");
  std::string sp_instance;
  int sp_job = 0, sp_q = 2;
  sp->add_option("--instance", sp_instance)->required();
  sp->add_option("--job", sp_job)->required();
  sp->add_option("--q", sp_q);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sim) {
      InstanceHandle inst;
      load(sim_instance, inst);
      ScheduleHandle s;
      check(wsrpt_simulate(inst.p, sim_policy.c_str(), opt_c(sim_tie), sim_budget, &s.p));
      Text json;
      check(wsrpt_schedule_to_json(s.p, &json.p));
      emit(g.out, json.str());
      if (!sim_csv.empty()) {
        Text csv;
        check(wsrpt_schedule_to_csv(s.p, &csv.p));
        emit(sim_csv, csv.str());
      }
      std::cerr << "objective " << objective_text(s, inst, g.exact) << "\n";
    } else if (*opt) {
      InstanceHandle inst;
      load(opt_instance, inst);
      ScheduleHandle s;
      check(wsrpt_optimal(inst.p, opt_method.c_str(), opt_c(opt_grid), &s.p));
      Text json;
      check(wsrpt_schedule_to_json(s.p, &json.p));
      emit(g.out, json.str());
      std::cerr << "objective " << objective_text(s, inst, g.exact) << "\n";
    } else if (*gen) {
      InstanceHandle inst;
      if (*gen_b) {
        wsrpt_scenario p{gb_y.c_str(), opt_c(gb_v), opt_c(gb_z), gb_delta.c_str()};
        check(wsrpt_gen_basic(&p, &inst.p));
      } else if (*gen_n) {
        wsrpt_scenario outer{gn_y.c_str(), opt_c(gn_v), opt_c(gn_z), gn_delta.c_str()};
        wsrpt_scenario inner{gn_iy ? gn_iy->c_str() : gn_y.c_str(), gn_iy ? opt_c(gn_iv) : opt_c(gn_v),
                             gn_iy ? opt_c(gn_iz) : opt_c(gn_z), gn_delta.c_str()};
        check(wsrpt_gen_nested(&outer, &inner, opt_c(gn_rs), opt_c(gn_ps), &inst.p));
      } else {
        gr_ranges.unit_weight = gr_unit;
        gr_ranges.zero_release = gr_zero;
        check(wsrpt_gen_random(gr_n, g.seed, &gr_ranges, &inst.p));
      }
      Text json;
      check(wsrpt_instance_to_json(inst.p, &json.p));
      emit(g.out, json.str());
      std::cerr << wsrpt_instance_size(inst.p) << " jobs\n";
    } else if (*tab) {
      Text csv;
      double worst = 0;
      check(wsrpt_table1_csv(&csv.p, &worst));
      emit(g.out, csv.str());
      std::cerr << "max |delta| " << worst << "\n";
      if (!(worst < 1e-3)) throw Failure{kExitAssertion, "table deviates by 1e-3 or more"};
    } else if (*optz) {
      double a = 0, b = 0, r = 0;
      std::string text;
      if (optz_what == "basic") {
        check(wsrpt_optimize_basic(&a, &b, &r));
        text = "y=" + std::to_string(a) + " v=" + std::to_string(b) + " ratio=" + std::to_string(r);
      } else if (optz_what == "lb") {
        check(wsrpt_optimize_lb(&a, &r));
        text = "p2=" + std::to_string(a) + " ratio=" + std::to_string(r);
      } else {
        check(wsrpt_nested_optimum(optz_rs, &a, &r));
        text = "p_s=" + std::to_string(a) + " ratio=" + std::to_string(r);
      }
      emit(g.out, text + "\n");
    } else if (*cur) {
      Text csv;
      check(wsrpt_curves_csv(cur_lo, cur_hi, cur_points, &csv.p));
      emit(g.out, csv.str());
    } else if (*adv) {
      Text json;
      double ratio = 0;
      check(wsrpt_adversary_play(adv_policy.c_str(), adv_tie.c_str(), opt_c(adv_delta), opt_c(adv_p1),
                                 opt_c(adv_p2), &json.p, &ratio));
      emit(g.out, json.str());
      std::cerr << "ratio " << ratio << "\n";
    } else if (*fz) {
      std::string cert = resolve(fz_cert);
      fz_opts.seed = g.seed;
      fz_opts.certificate_path = cert.empty() ? nullptr : cert.c_str();
      wsrpt_fuzz_report rep;
      Text json;
      check(wsrpt_fuzz(&fz_opts, &rep, &json.p));
      emit(g.out, json.str());
      if (!rep.ok) throw Failure{kExitAssertion, "fuzz envelope violated"};
    } else if (*ren) {
      InstanceHandle inst;
      load(ren_instance, inst);
      ScheduleHandle s;
      if (ren_schedule) {
        std::ifstream f(*ren_schedule);
        if (!f) throw Failure{kExitValidation, "cannot open '" + *ren_schedule + "'"};
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        check(wsrpt_schedule_from_json(text.c_str(), &s.p));
      } else {
        check(wsrpt_simulate(inst.p, ren_policy.c_str(), opt_c(ren_tie), 0, &s.p));
      }
      check(wsrpt_schedule_validate(s.p, inst.p));
      std::string path = resolve(g.out.empty() ? ren_kind + ".svg" : g.out);
      if (ren_kind == "gantt") {
        check(wsrpt_render_gantt(s.p, inst.p, path.c_str()));
      } else {
        check(wsrpt_render_profile(s.p, inst.p, path.c_str()));
      }
      std::cerr << "wrote " << path << "\n";
    } else if (*eq) {
      InstanceHandle inst;
      load(eq_instance, inst);
      int pass = 0;
      Text json;
      check(wsrpt_is_equality_instance(inst.p, opt_c(eq_tie), &pass, &json.p));
      emit(g.out, json.str());
      if (!pass) return kExitValidation;
    } else if (*sp) {
      InstanceHandle inst, out;
      load(sp_instance, inst);
      check(wsrpt_split_job(inst.p, sp_job, sp_q, &out.p));
      Text json;
      check(wsrpt_instance_to_json(out.p, &json.p));
      emit(g.out, json.str());
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
