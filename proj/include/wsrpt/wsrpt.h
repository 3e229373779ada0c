/* C interface to the WSRPT scheduling workbench.
 *
 * Every call returns a wsrpt_status. On failure wsrpt_last_error() describes
 * the problem (per thread). Strings returned through char** are owned by the
 * caller and released with wsrpt_string_free. Exact values cross the boundary
 * as rational strings such as "3/7" or decimals such as "0.8157".
 */
#ifndef WSRPT_WSRPT_H_
#define WSRPT_WSRPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WSRPT_API __declspec(dllexport)
#else
#define WSRPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsrpt_status {
  WSRPT_OK = 0,
  WSRPT_ERR_INVALID_ARGUMENT = 1,
  WSRPT_ERR_PARSE = 2,
  WSRPT_ERR_IO = 3,
  WSRPT_ERR_BUDGET_EXCEEDED = 4,
  WSRPT_ERR_DOMAIN = 5,
  WSRPT_ERR_NOT_GENERATED = 6,
  WSRPT_ERR_INFEASIBLE = 7,
  WSRPT_ERR_INTERNAL = 99
} wsrpt_status;

typedef struct wsrpt_instance wsrpt_instance;
typedef struct wsrpt_schedule wsrpt_schedule;

WSRPT_API const char* wsrpt_last_error(void);
WSRPT_API const char* wsrpt_version(void);
WSRPT_API void wsrpt_string_free(char* s);

/* Instances */
WSRPT_API wsrpt_status wsrpt_instance_read(const char* path, wsrpt_instance** out);
WSRPT_API wsrpt_status wsrpt_instance_from_json(const char* json, wsrpt_instance** out);
WSRPT_API wsrpt_status wsrpt_instance_write(const wsrpt_instance* inst, const char* path);
WSRPT_API wsrpt_status wsrpt_instance_to_json(const wsrpt_instance* inst, char** out);
WSRPT_API size_t wsrpt_instance_size(const wsrpt_instance* inst);
WSRPT_API void wsrpt_instance_free(wsrpt_instance* inst);
WSRPT_API wsrpt_status wsrpt_normalize_releases(const wsrpt_instance* inst, wsrpt_instance** out);
WSRPT_API wsrpt_status wsrpt_split_job(const wsrpt_instance* inst, int job, int q,
                                       wsrpt_instance** out);

/* Generators. NULL v or z means absent. */
typedef struct wsrpt_scenario {
  const char* y;
  const char* v;
  const char* z;
  const char* delta;
} wsrpt_scenario;

typedef struct wsrpt_random_ranges {
  int max_release;
  int max_processing;
  int max_weight;
  int denominator;
  int unit_weight;
  int zero_release;
} wsrpt_random_ranges;

WSRPT_API void wsrpt_random_ranges_default(wsrpt_random_ranges* out);
WSRPT_API wsrpt_status wsrpt_gen_basic(const wsrpt_scenario* params, wsrpt_instance** out);
/* NULL p_s picks the maximizer of the combined ratio. */
WSRPT_API wsrpt_status wsrpt_gen_nested(const wsrpt_scenario* outer, const wsrpt_scenario* inner,
                                        const char* r_s, const char* p_s, wsrpt_instance** out);
WSRPT_API wsrpt_status wsrpt_gen_random(int n, uint64_t seed, const wsrpt_random_ranges* ranges,
                                        wsrpt_instance** out);

/* Simulation. policy: "wsrpt" | "wspt" | "srpt". tie: "prefer-running" |
 * "prefer-new-longest" | "prefer-new-shortest" | "scripted" (uses the
 * instance's tie script) | "exhaustive-worst". NULL tie means "scripted" when
 * the instance carries a script, else "prefer-running". branch_budget 0 =
 * default. */
WSRPT_API wsrpt_status wsrpt_simulate(const wsrpt_instance* inst, const char* policy,
                                      const char* tie, uint64_t branch_budget,
                                      wsrpt_schedule** out);
WSRPT_API wsrpt_status wsrpt_is_equality_instance(const wsrpt_instance* inst, const char* tie,
                                                  int* pass, char** report_json);
WSRPT_API wsrpt_status wsrpt_segments_json(const wsrpt_schedule* sched,
                                           const wsrpt_instance* inst, char** out);

/* Optima. method: "brute" | "dp" | "structured". grid (dp only) may be NULL
 * for 1 / lcm of all denominators. */
WSRPT_API wsrpt_status wsrpt_optimal(const wsrpt_instance* inst, const char* method,
                                     const char* grid, wsrpt_schedule** out);

/* Schedules */
WSRPT_API wsrpt_status wsrpt_schedule_from_json(const char* json, wsrpt_schedule** out);
WSRPT_API wsrpt_status wsrpt_schedule_to_json(const wsrpt_schedule* sched, char** out);
WSRPT_API wsrpt_status wsrpt_schedule_to_csv(const wsrpt_schedule* sched, char** out);
WSRPT_API wsrpt_status wsrpt_schedule_validate(const wsrpt_schedule* sched,
                                               const wsrpt_instance* inst);
WSRPT_API void wsrpt_schedule_free(wsrpt_schedule* sched);
/* exact may be NULL; value may be NULL. */
WSRPT_API wsrpt_status wsrpt_objective(const wsrpt_schedule* sched, const wsrpt_instance* inst,
                                       char** exact, double* value);

/* Analysis */
typedef struct wsrpt_metrics {
  double c;
  double c_star;
  double ratio;
  double w;
  double l;
} wsrpt_metrics;

/* v and z may be NULL. */
WSRPT_API wsrpt_status wsrpt_profile_metrics(double y, const double* v, const double* z,
                                             wsrpt_metrics* out);
WSRPT_API wsrpt_status wsrpt_table1_csv(char** out, double* max_delta);
WSRPT_API wsrpt_status wsrpt_optimize_basic(double* y, double* v, double* ratio);
WSRPT_API wsrpt_status wsrpt_nested_optimum(double r_s, double* p_s, double* ratio);
WSRPT_API wsrpt_status wsrpt_lb_c1(double p1, double p2, double* out);
WSRPT_API wsrpt_status wsrpt_optimize_lb(double* p2, double* ratio);
WSRPT_API wsrpt_status wsrpt_curves_csv(double p2_min, double p2_max, int points, char** out);

/* Adversary. policy also accepts "j2-first" and "equalizer". NULL numeric
 * strings take the defaults (delta 1/1000, p1 1, p2 2.3364). */
WSRPT_API wsrpt_status wsrpt_adversary_play(const char* policy, const char* tie,
                                            const char* delta, const char* p1, const char* p2,
                                            char** transcript_json, double* ratio);

/* Fuzzing */
typedef struct wsrpt_fuzz_options {
  uint64_t trials;
  int n_max;
  uint64_t seed;
  unsigned threads;
  const char* certificate_path; /* may be NULL */
} wsrpt_fuzz_options;

typedef struct wsrpt_fuzz_report {
  uint64_t trials;
  uint64_t skipped;
  double worst_ratio;
  int ok;
  uint64_t class_trials[3]; /* unit-weight, zero-release, general */
  uint64_t class_not_one[3];
  double class_max[3];
} wsrpt_fuzz_report;

WSRPT_API wsrpt_status wsrpt_fuzz(const wsrpt_fuzz_options* options, wsrpt_fuzz_report* out,
                                  char** report_json);

/* Rendering */
WSRPT_API wsrpt_status wsrpt_render_gantt(const wsrpt_schedule* sched, const wsrpt_instance* inst,
                                          const char* path);
WSRPT_API wsrpt_status wsrpt_render_profile(const wsrpt_schedule* sched,
                                            const wsrpt_instance* inst, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* WSRPT_WSRPT_H_ */
