#include <votkit/votkit.h>

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                        \
  do {                                                                     \
    if (!(cond)) {                                                         \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                          \
    }                                                                      \
  } while (0)

#define CHECK_OK(call)                                                                       \
  do {                                                                                       \
    votkit_status st_ = (call);                                                              \
    if (st_ != VOTKIT_OK) {                                                                  \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call, votkit_status_name(st_), \
              votkit_last_error());                                                          \
      ++failures;                                                                            \
    }                                                                                        \
  } while (0)

static void test_regions(void) {
  votkit_region *a = NULL, *b = NULL, *absent = NULL;
  CHECK_OK(votkit_region_parse("0,0,10,10", &a));
  CHECK_OK(votkit_region_parse("5,0,10,10", &b));
  CHECK_OK(votkit_region_parse("absent", &absent));
  double o = -1;
  CHECK_OK(votkit_region_overlap(a, b, &o));
  CHECK(fabs(o - 1.0 / 3.0) < 1e-12);
  CHECK_OK(votkit_region_overlap(a, absent, &o));
  CHECK(o == 0.0);
  CHECK(votkit_region_is_absent(absent) == 1);
  CHECK(votkit_region_is_absent(a) == 0);

  char small[8];
  size_t needed = 0;
  CHECK(votkit_region_format(a, small, sizeof small, &needed) == VOTKIT_E_BUFFER_TOO_SMALL);
  CHECK(needed == strlen("0.0000,0.0000,10.0000,10.0000") + 1);
  CHECK(votkit_region_format(a, NULL, 0, &needed) == VOTKIT_E_BUFFER_TOO_SMALL);
  char* buf = malloc(needed);
  CHECK_OK(votkit_region_format(a, buf, needed, NULL));
  CHECK(strcmp(buf, "0.0000,0.0000,10.0000,10.0000") == 0);
  free(buf);

  votkit_region* bad = NULL;
  CHECK(votkit_region_parse("1,2,3", &bad) == VOTKIT_E_FORMAT);
  CHECK(bad == NULL);
  CHECK(strlen(votkit_last_error()) > 0);
  CHECK(votkit_region_parse("1,1,-3,4", &bad) == VOTKIT_E_INVALID_REGION);
  CHECK(votkit_region_parse(NULL, &bad) == VOTKIT_E_INVALID_ARGUMENT);
  CHECK(votkit_region_overlap(NULL, b, &o) == VOTKIT_E_INVALID_ARGUMENT);
  CHECK_OK(votkit_region_overlap(a, a, &o));
  CHECK(strlen(votkit_last_error()) == 0);

  votkit_region_free(a);
  votkit_region_free(b);
  votkit_region_free(absent);
  votkit_region_free(NULL);
}

static void test_stats(void) {
  const double d[] = {1.2, -0.4, 2.2, 3.1, 0.7, 1.9, -0.2, 2.5};
  votkit_test_result r;
  CHECK_OK(votkit_signed_rank(d, 8, 0.05, &r));
  CHECK(r.n == 8 && r.exact == 1);
  CHECK(r.p_value > 0 && r.p_value <= 1);
  const double x[] = {1, 2, 3, 4, 5}, y[] = {6, 7, 8, 9, 10};
  CHECK_OK(votkit_rank_sum(x, 5, y, 5, 0.05, &r));
  CHECK(r.significant == 1);
  CHECK(votkit_rank_sum(x, 0, y, 5, 0.05, &r) != VOTKIT_OK);

  const double pi[] = {0.7, 0.7}, pj[] = {0.6, 0.6}, g[] = {0.1, 0.1};
  int different = -1;
  CHECK_OK(votkit_practical_difference(pi, pj, g, 2, &different));
  CHECK(different == 0); /* mean normalized difference is exactly 1 */
  const double g2[] = {0.05, 0.05};
  CHECK_OK(votkit_practical_difference(pi, pj, g2, 2, &different));
  CHECK(different == 1);

  uint64_t count = 0;
  CHECK_OK(votkit_gamma_sample_count(4, 21, &count));
  CHECK(count == 15960);
}

static void test_estimators(void) {
  votkit_reinit_params rp;
  votkit_reinit_params_init(&rp);
  rp.mu = 0.63;
  rp.sigma = 0.4;
  rp.Ns = 150;
  rp.p = 0.5;
  rp.delta = 15;
  votkit_moments m;
  CHECK_OK(votkit_estimator_moments(VOTKIT_ESTIMATOR_NOR, &rp, NULL, &m));
  CHECK(fabs(m.mean - 0.4725) < 1e-12);
  CHECK_OK(votkit_estimator_moments(VOTKIT_ESTIMATOR_WIR, &rp, NULL, &m));
  CHECK(fabs(m.mean - 0.63) < 1e-12);
  CHECK(votkit_estimator_moments(VOTKIT_ESTIMATOR_NOR, NULL, NULL, &m) == VOTKIT_E_INVALID_ARGUMENT);
  rp.p = 2.0;
  CHECK(votkit_estimator_moments(VOTKIT_ESTIMATOR_NOR, &rp, NULL, &m) == VOTKIT_E_PARAMETER);

  votkit_annotation_params ap;
  votkit_annotation_params_init(&ap);
  ap.mu_a = 0.0;
  ap.mu_b = 0.6;
  ap.eta = 2.0;
  ap.beta = 0.1;
  CHECK_OK(votkit_estimator_moments(VOTKIT_ESTIMATOR_GLA, NULL, &ap, &m));
  CHECK(fabs(m.mean - 0.4) < 1e-12);
  CHECK_OK(votkit_estimator_moments(VOTKIT_ESTIMATOR_PFA, NULL, &ap, &m));
  CHECK(fabs(m.mean - 0.06 / 1.1) < 1e-12);
  CHECK(votkit_estimator_moments((votkit_estimator)9, &rp, &ap, &m) == VOTKIT_E_INVALID_ARGUMENT);
}

static void test_workspace(const char* dir) {
  char path[4096];
  snprintf(path, sizeof path, "%s/workspace.ini", dir);
  FILE* f = fopen(path, "w");
  CHECK(f != NULL);
  if (!f) return;
  fputs("seed = 3\n[runner]\nn_rep = 2\n[tracker.oracle]\nbuiltin = noisy_oracle\n[tracker.drift]\nbuiltin = drifter\n", f);
  fclose(f);

  votkit_workspace* ws = NULL;
  CHECK(votkit_workspace_open("/nonexistent/workspace.ini", &ws) == VOTKIT_E_CONFIG);
  CHECK(ws == NULL);
  CHECK_OK(votkit_workspace_open(path, &ws));
  if (!ws) return;

  votkit_synth_options so;
  votkit_synth_options_init(&so);
  so.count = 2;
  so.length = 30;
  CHECK_OK(votkit_dataset_synth(ws, &so));
  CHECK(strstr(votkit_workspace_summary(ws), "synthesized 2 sequences") != NULL);

  votkit_evaluate_options eo;
  votkit_evaluate_options_init(&eo);
  CHECK_OK(votkit_evaluate(ws, &eo));
  CHECK(strstr(votkit_workspace_summary(ws), "8/8 runs ok") != NULL);
  const char* only[] = {"missing"};
  eo.trackers = only;
  eo.n_trackers = 1;
  CHECK(votkit_evaluate(ws, &eo) == VOTKIT_E_CONFIG);

  votkit_analyze_options ao;
  votkit_analyze_options_init(&ao);
  CHECK_OK(votkit_analyze(ws, VOTKIT_ANALYZE_MEASURES, &ao));
  CHECK_OK(votkit_analyze(ws, VOTKIT_ANALYZE_RANK, &ao));
  ao.mode = "nonsense";
  CHECK(votkit_analyze(ws, VOTKIT_ANALYZE_RANK, &ao) == VOTKIT_E_USAGE);

  votkit_simulate_options sim;
  votkit_simulate_options_init(&sim);
  sim.trials = 200;
  sim.output = "-";
  CHECK_OK(votkit_simulate_estimators(ws, &sim));
  CHECK(strstr(votkit_workspace_document(ws), "\"agrees_3se\"") != NULL);
  sim.trials = 1;
  CHECK(votkit_simulate_estimators(ws, &sim) == VOTKIT_E_PARAMETER);

  CHECK(votkit_dataset_synth(NULL, &so) == VOTKIT_E_INVALID_ARGUMENT);
  votkit_workspace_close(ws);
  votkit_workspace_close(NULL);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s SCRATCH_DIR\n", argv[0]);
    return 2;
  }
  CHECK(strcmp(votkit_status_name(VOTKIT_OK), "ok") == 0);
  CHECK(strcmp(votkit_status_name(VOTKIT_E_BUFFER_TOO_SMALL), "buffer_too_small") == 0);
  CHECK(strcmp(votkit_status_name((votkit_status)99), "unknown") == 0);
  CHECK(strlen(votkit_version()) > 0);
  test_regions();
  test_stats();
  test_estimators();
  test_workspace(argv[1]);
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
