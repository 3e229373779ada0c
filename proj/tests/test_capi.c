/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wsrpt/wsrpt.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s (%s)\n", __FILE__, __LINE__, \
              #cond, wsrpt_last_error());                             \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void instances_and_schedules(void) {
  wsrpt_instance* inst = NULL;
  wsrpt_schedule* sched = NULL;
  char* exact = NULL;
  double value = 0;
  const char* two =
      "{\"jobs\":[{\"id\":0,\"r\":\"0\",\"p\":\"2\",\"w\":\"1\"},"
      "{\"id\":1,\"r\":\"1\",\"p\":\"1\",\"w\":\"9\"}]}";

  EXPECT(wsrpt_instance_from_json(two, &inst) == WSRPT_OK);
  EXPECT(wsrpt_instance_size(inst) == 2);
  EXPECT(wsrpt_simulate(inst, "wsrpt", "prefer-running", 0, &sched) == WSRPT_OK);
  EXPECT(wsrpt_schedule_validate(sched, inst) == WSRPT_OK);
  EXPECT(wsrpt_objective(sched, inst, &exact, &value) == WSRPT_OK);
  EXPECT(strcmp(exact, "21") == 0);
  EXPECT(value == 21.0);
  wsrpt_string_free(exact);
  wsrpt_schedule_free(sched);

  EXPECT(wsrpt_optimal(inst, "brute", NULL, &sched) == WSRPT_OK);
  EXPECT(wsrpt_objective(sched, inst, NULL, &value) == WSRPT_OK);
  EXPECT(value == 21.0);
  wsrpt_schedule_free(sched);
  EXPECT(wsrpt_optimal(inst, "dp", NULL, &sched) == WSRPT_OK);
  wsrpt_schedule_free(sched);
  EXPECT(wsrpt_optimal(inst, "structured", NULL, &sched) == WSRPT_ERR_NOT_GENERATED);
  EXPECT(wsrpt_simulate(inst, "fifo", "prefer-running", 0, &sched) == WSRPT_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(wsrpt_last_error()) > 0);
  wsrpt_instance_free(inst);

  EXPECT(wsrpt_instance_from_json("{\"jobs\":[{\"id\":0}]}", &inst) == WSRPT_ERR_PARSE);
  EXPECT(wsrpt_instance_read("/nonexistent/instance.json", &inst) == WSRPT_ERR_IO);
  EXPECT(wsrpt_schedule_from_json("{\"slices\":[{\"job\":0,\"start\":\"1\",\"end\":\"1\"}]}",
                                  &sched) == WSRPT_ERR_INFEASIBLE);
}

static void generators(void) {
  wsrpt_scenario s = {"0.8157", "0.7066", NULL, "1/100"};
  wsrpt_instance* inst = NULL;
  wsrpt_schedule* on = NULL;
  wsrpt_schedule* opt = NULL;
  int pass = 0;
  double a = 0, b = 0;

  EXPECT(wsrpt_gen_basic(&s, &inst) == WSRPT_OK);
  EXPECT(wsrpt_is_equality_instance(inst, "scripted", &pass, NULL) == WSRPT_OK);
  EXPECT(pass == 1);
  pass = 0;
  EXPECT(wsrpt_is_equality_instance(inst, NULL, &pass, NULL) == WSRPT_OK);
  EXPECT(pass == 1);
  EXPECT(wsrpt_simulate(inst, "wsrpt", "scripted", 0, &on) == WSRPT_OK);
  EXPECT(wsrpt_optimal(inst, "structured", NULL, &opt) == WSRPT_OK);
  EXPECT(wsrpt_objective(on, inst, NULL, &a) == WSRPT_OK);
  EXPECT(wsrpt_objective(opt, inst, NULL, &b) == WSRPT_OK);
  EXPECT(fabs(a / b - 1.2259) < 0.01);
  wsrpt_schedule_free(on);
  wsrpt_schedule_free(opt);
  wsrpt_instance_free(inst);

  wsrpt_random_ranges r;
  wsrpt_random_ranges_default(&r);
  EXPECT(r.denominator == 2);
  EXPECT(wsrpt_gen_random(0, 1, &r, &inst) == WSRPT_ERR_INVALID_ARGUMENT);
  EXPECT(wsrpt_gen_random(4, 1, &r, &inst) == WSRPT_OK);
  wsrpt_instance* split = NULL;
  EXPECT(wsrpt_split_job(inst, 0, 3, &split) == WSRPT_OK);
  EXPECT(wsrpt_instance_size(split) == 6);
  wsrpt_instance_free(split);
  wsrpt_instance_free(inst);
}

static void analysis(void) {
  double y = 0, v = 0, ratio = 0, c1 = 0, p2 = 0;
  wsrpt_metrics m;
  char* csv = NULL;
  double max_delta = 1;

  EXPECT(wsrpt_optimize_basic(&y, &v, &ratio) == WSRPT_OK);
  EXPECT(fabs(ratio - 1.2259) < 5e-4);
  EXPECT(wsrpt_profile_metrics(0.5, NULL, NULL, &m) == WSRPT_OK);
  EXPECT(fabs(m.ratio - 1.0906) < 1e-4);
  EXPECT(wsrpt_lb_c1(1, 2.3364, &c1) == WSRPT_OK);
  EXPECT(fabs(c1 - 1.1038) < 1e-4);
  EXPECT(wsrpt_optimize_lb(&p2, &ratio) == WSRPT_OK);
  EXPECT(fabs(p2 - 2.3364) < 1e-3);
  EXPECT(wsrpt_table1_csv(&csv, &max_delta) == WSRPT_OK);
  EXPECT(max_delta < 1e-3);
  wsrpt_string_free(csv);
  EXPECT(wsrpt_profile_metrics(1.5, NULL, NULL, &m) != WSRPT_OK);
}

static void adversary_and_fuzz(void) {
  double ratio = 0;
  char* json = NULL;
  wsrpt_fuzz_options o = {60, 5, 3, 1, NULL};
  wsrpt_fuzz_report r;

  EXPECT(wsrpt_adversary_play("wsrpt", "prefer-running", "1/100", NULL, NULL, &json, &ratio) ==
         WSRPT_OK);
  EXPECT(ratio > 1.09);
  EXPECT(json != NULL && strstr(json, "\"branch\"") != NULL);
  wsrpt_string_free(json);

  EXPECT(wsrpt_fuzz(&o, &r, NULL) == WSRPT_OK);
  EXPECT(r.ok == 1);
  EXPECT(r.trials == 60);
  EXPECT(r.class_not_one[0] == 0);
  EXPECT(r.class_not_one[1] == 0);
}

int main(void) {
  printf("wsrpt %s\n", wsrpt_version());
  instances_and_schedules();
  generators();
  analysis();
  adversary_and_fuzz();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("ok\n");
  return 0;
}
