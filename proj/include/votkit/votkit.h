#ifndef VOTKIT_VOTKIT_H
#define VOTKIT_VOTKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VOTKIT_API __declspec(dllexport)
#else
#define VOTKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum votkit_status {
  VOTKIT_OK = 0,
  VOTKIT_E_INVALID_ARGUMENT = 1,
  VOTKIT_E_INVALID_REGION = 2,
  VOTKIT_E_FORMAT = 3,
  VOTKIT_E_IO = 4,
  VOTKIT_E_PROTOCOL = 5,
  VOTKIT_E_TIMEOUT = 6,
  VOTKIT_E_CRASH = 7,
  VOTKIT_E_PARAMETER = 8,
  VOTKIT_E_SHAPE = 9,
  VOTKIT_E_CONTRACT = 10,
  VOTKIT_E_INSUFFICIENT_DATA = 11,
  VOTKIT_E_UNDEFINED_MEASURE = 12,
  VOTKIT_E_CONFIG = 13,
  VOTKIT_E_USAGE = 14,
  VOTKIT_E_INTERNAL = 15,
  VOTKIT_E_BUFFER_TOO_SMALL = 16
} votkit_status;

/* Message of the most recent failure on the calling thread; empty after a success. */
VOTKIT_API const char* votkit_last_error(void);
VOTKIT_API const char* votkit_status_name(votkit_status status);
VOTKIT_API const char* votkit_version(void);

/* ---- Regions ---------------------------------------------------------------------------------- */

typedef struct votkit_region votkit_region;

VOTKIT_API votkit_status votkit_region_parse(const char* text, votkit_region** out);
VOTKIT_API void votkit_region_free(votkit_region* region);
/* Writes the canonical text form including the terminating NUL; `needed` receives the full size. */
VOTKIT_API votkit_status votkit_region_format(const votkit_region* region, char* buffer, size_t capacity,
                                              size_t* needed);
VOTKIT_API votkit_status votkit_region_overlap(const votkit_region* a, const votkit_region* b, double* out);
VOTKIT_API int votkit_region_is_absent(const votkit_region* region);

/* ---- Statistics ------------------------------------------------------------------------------- */

typedef struct votkit_test_result {
  double statistic;
  double p_value;
  int significant;
  int exact; /* 1: exact distribution, 0: normal approximation */
  size_t n;
} votkit_test_result;

VOTKIT_API votkit_status votkit_signed_rank(const double* differences, size_t n, double alpha,
                                            votkit_test_result* out);
VOTKIT_API votkit_status votkit_rank_sum(const double* a, size_t na, const double* b, size_t nb, double alpha,
                                         votkit_test_result* out);
/* `different` receives 1 when the mean gamma-normalized difference exceeds one. */
VOTKIT_API votkit_status votkit_practical_difference(const double* phi_i, const double* phi_j, const double* gamma,
                                                     size_t n, int* different);
VOTKIT_API votkit_status votkit_gamma_sample_count(uint64_t frames, uint64_t boxes_per_frame, uint64_t* out);

/* ---- Estimator theory ------------------------------------------------------------------------- */

typedef enum votkit_estimator {
  VOTKIT_ESTIMATOR_NOR = 0,
  VOTKIT_ESTIMATOR_WIR = 1,
  VOTKIT_ESTIMATOR_GLA = 2,
  VOTKIT_ESTIMATOR_PFA = 3
} votkit_estimator;

typedef struct votkit_reinit_params {
  double mu;
  double sigma;
  int N;
  int Ns;
  double p;
  int delta;
} votkit_reinit_params;

typedef struct votkit_annotation_params {
  double mu_a;
  double mu_b;
  double sigma;
  int N;
  int NA;
  double eta;
  double beta;
} votkit_annotation_params;

typedef struct votkit_moments {
  double mean;
  double variance;
} votkit_moments;

VOTKIT_API void votkit_reinit_params_init(votkit_reinit_params* params);
VOTKIT_API void votkit_annotation_params_init(votkit_annotation_params* params);
/* NOR/WIR read `reinit`, GLA/PFA read `annotation`; the other pointer may be NULL. */
VOTKIT_API votkit_status votkit_estimator_moments(votkit_estimator kind, const votkit_reinit_params* reinit,
                                                  const votkit_annotation_params* annotation, votkit_moments* out);

/* ---- Workspace pipelines ---------------------------------------------------------------------- */

typedef struct votkit_workspace votkit_workspace;

VOTKIT_API votkit_status votkit_workspace_open(const char* path, votkit_workspace** out);
VOTKIT_API void votkit_workspace_close(votkit_workspace* ws);
/* One-line summary of the last successful command; valid until the next call on the handle. */
VOTKIT_API const char* votkit_workspace_summary(const votkit_workspace* ws);
/* Document produced by the last command (JSON for simulations), or an empty string. */
VOTKIT_API const char* votkit_workspace_document(const votkit_workspace* ws);

typedef struct votkit_seed {
  int present;
  uint64_t value;
} votkit_seed;

typedef struct votkit_synth_options {
  int count;
  int length;
  double gamma;
  votkit_seed seed;
  const char* const* scripts; /* NULL/0: random scripts; otherwise one sequence per script file */
  size_t n_scripts;
} votkit_synth_options;

typedef struct votkit_dataset_options {
  size_t clusters; /* cluster only */
  const char* sequence;    /* gamma only; NULL for every sequence with an annotations.txt */
  const char* annotations; /* gamma only */
  votkit_seed seed;
} votkit_dataset_options;

typedef struct votkit_evaluate_options {
  const char* const* trackers; /* NULL/0: every registered tracker */
  size_t n_trackers;
  const char* experiment;
  int workers;
  votkit_seed seed;
} votkit_evaluate_options;

typedef enum votkit_analysis {
  VOTKIT_ANALYZE_MEASURES = 0,
  VOTKIT_ANALYZE_RANK = 1,
  VOTKIT_ANALYZE_DIFFICULTY = 2,
  VOTKIT_ANALYZE_BURNIN = 3,
  VOTKIT_ANALYZE_RANK_VARIANCE = 4,
  VOTKIT_PLOT_AR = 5
} votkit_analysis;

typedef struct votkit_analyze_options {
  const char* experiment;
  const char* const* trackers;
  size_t n_trackers;
  const char* mode; /* sequence_pooled | attribute_normalized | sequence_normalized; NULL: per-command default */
  int tests;        /* -1: workspace setting, 0/1: override (rank) */
  int horizon;      /* burnin */
  size_t subset_size; /* rank variance */
  size_t subsets;
  int raw; /* plot: raw accuracy/reliability axes */
  votkit_seed seed;
} votkit_analyze_options;

typedef struct votkit_estimators_options {
  const char* tracker;
  const char* nor_experiment;
  const char* wir_experiment;
  size_t subset_size;
  size_t samples;
  const char* sampling; /* bootstrap | subset */
  votkit_seed seed;
} votkit_estimators_options;

typedef struct votkit_simulate_options {
  const char* kind; /* NOR | WIR | GLA | PFA | all */
  size_t trials;
  votkit_reinit_params reinit;
  votkit_annotation_params annotation;
  const char* output; /* NULL: reports/simulate_estimators.json; "-": no file */
  votkit_seed seed;
} votkit_simulate_options;

VOTKIT_API void votkit_synth_options_init(votkit_synth_options* options);
VOTKIT_API void votkit_dataset_options_init(votkit_dataset_options* options);
VOTKIT_API void votkit_evaluate_options_init(votkit_evaluate_options* options);
VOTKIT_API void votkit_analyze_options_init(votkit_analyze_options* options);
VOTKIT_API void votkit_estimators_options_init(votkit_estimators_options* options);
VOTKIT_API void votkit_simulate_options_init(votkit_simulate_options* options);

VOTKIT_API votkit_status votkit_dataset_synth(votkit_workspace* ws, const votkit_synth_options* options);
VOTKIT_API votkit_status votkit_dataset_attributes(votkit_workspace* ws, const votkit_dataset_options* options);
VOTKIT_API votkit_status votkit_dataset_cluster(votkit_workspace* ws, const votkit_dataset_options* options);
VOTKIT_API votkit_status votkit_dataset_gamma(votkit_workspace* ws, const votkit_dataset_options* options);
VOTKIT_API votkit_status votkit_evaluate(votkit_workspace* ws, const votkit_evaluate_options* options);
VOTKIT_API votkit_status votkit_analyze(votkit_workspace* ws, votkit_analysis what,
                                        const votkit_analyze_options* options);
VOTKIT_API votkit_status votkit_analyze_estimators(votkit_workspace* ws, const votkit_estimators_options* options);
VOTKIT_API votkit_status votkit_simulate_estimators(votkit_workspace* ws, const votkit_simulate_options* options);

#ifdef __cplusplus
}
#endif

#endif
