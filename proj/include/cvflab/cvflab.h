/*
 * Copyright (c) 2026, The cvflab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to cvflab.
 *
 * Objects are opaque handles released with their *_free function (NULL is
 * accepted). Every fallible call returns a cvf_status; on failure,
 * cvf_last_error() describes the most recent error on the calling thread.
 * Out-parameters are written only on CVF_OK.
 */

#ifndef CVFLAB_CVFLAB_H_
#define CVFLAB_CVFLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CVF_API __declspec(dllexport)
#else
#define CVF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvf_status {
  CVF_OK = 0,
  CVF_E_USAGE = 1,
  CVF_E_CONTRACT = 2,
  CVF_E_RESOURCE = 3,
  CVF_E_STABILIZATION = 4,
  CVF_E_IO = 5,
  CVF_E_DEGENERATE = 6,
  CVF_E_FIT = 7,
  CVF_E_GENERATION = 8,
  CVF_E_EMPTY = 9,
  CVF_E_UNREACHABLE = 10,
  CVF_E_INTERNAL = 11
} cvf_status;

typedef enum cvf_rank_kind { CVF_RANK_MAX = 0, CVF_RANK_AVERAGE = 1 } cvf_rank_kind;
typedef enum cvf_cvf_kind { CVF_CVF_MAX = 0, CVF_CVF_FEASIBLE = 1 } cvf_cvf_kind;
typedef enum cvf_format { CVF_FORMAT_CSV = 0, CVF_FORMAT_JSON = 1 } cvf_format;

CVF_API const char* cvf_version(void);
CVF_API const char* cvf_status_name(cvf_status status);
/* Message of the last failed call on this thread ("" if none). */
CVF_API const char* cvf_last_error(void);

/* ---- communication graphs ---- */

typedef struct cvf_graph cvf_graph;

/* topology: "ring", "power-law" (uses attach) or "random-regular" (uses
   degree). */
CVF_API cvf_status cvf_graph_generate(const char* topology, uint64_t n,
                                      uint64_t degree, uint64_t attach,
                                      uint64_t seed, cvf_graph** out);
CVF_API cvf_status cvf_graph_read(const char* path, cvf_graph** out);
CVF_API cvf_status cvf_graph_write(const cvf_graph* graph, const char* path);
CVF_API uint64_t cvf_graph_node_count(const cvf_graph* graph);
CVF_API uint64_t cvf_graph_edge_count(const cvf_graph* graph);
/* i-th edge in ascending (u, v) order, u < v. */
CVF_API cvf_status cvf_graph_edge(const cvf_graph* graph, uint64_t i,
                                  uint32_t* u, uint32_t* v);
CVF_API void cvf_graph_free(cvf_graph* graph);

/* ---- programs ---- */

typedef struct cvf_program cvf_program;

/* name: "token-ring" (ring of graph's node count), "coloring", "matching". */
CVF_API cvf_status cvf_program_create(const char* name, const cvf_graph* graph,
                                      cvf_program** out);
CVF_API uint64_t cvf_program_process_count(const cvf_program* program);
/* CVF_E_RESOURCE when |S_p| does not fit in 64 bits. */
CVF_API cvf_status cvf_program_state_count(const cvf_program* program,
                                           uint64_t* out);
CVF_API void cvf_program_free(cvf_program* program);

/* ---- full state space and ranks ---- */

typedef struct cvf_space cvf_space;
typedef struct cvf_ranks cvf_ranks;

/* memory_budget in bytes; 0 selects the default (8 GiB). */
CVF_API cvf_status cvf_space_enumerate(const cvf_program* program,
                                       uint64_t memory_budget,
                                       unsigned workers, cvf_space** out);
CVF_API uint64_t cvf_space_state_count(const cvf_space* space);
CVF_API uint64_t cvf_space_invariant_count(const cvf_space* space);
CVF_API void cvf_space_free(cvf_space* space);

CVF_API cvf_status cvf_ranks_compute(const cvf_space* space,
                                     cvf_rank_kind kind, unsigned workers,
                                     cvf_ranks** out);
CVF_API cvf_status cvf_ranks_get(const cvf_ranks* ranks, uint64_t state,
                                 double* out);
/* Binary "CVFR" rank dump. */
CVF_API cvf_status cvf_ranks_dump(const cvf_ranks* ranks, const char* path);
CVF_API void cvf_ranks_free(cvf_ranks* ranks);

/* ---- analysis results ---- */

typedef struct cvf_report_data {
  cvf_rank_kind rank_kind;
  int partial;  /* 0 full, 1 partial */
  double effect_prog;
  double effect_cvf;
  double rel_cvf;
  int has_fit;  /* fit_* are NaN when 0 */
  double fit_A;
  double fit_B;
  double fit_r2;
} cvf_report_data;

typedef struct cvf_sampling_config {
  uint64_t num_states;
  uint64_t paths_per_state;
  uint64_t walk_cap;
  uint64_t seed;
  unsigned workers;
} cvf_sampling_config;

CVF_API void cvf_sampling_config_default(cvf_sampling_config* config);

/* Accumulates reports and histograms labelled with one program instance. */
typedef struct cvf_analysis cvf_analysis;

CVF_API cvf_status cvf_analysis_create(const char* program_label,
                                       const char* topology_label, uint64_t n,
                                       cvf_analysis** out);
/* Appends one full-analysis report plus its program and cvf histograms. */
CVF_API cvf_status cvf_analyze_full(cvf_analysis* analysis,
                                    const cvf_space* space,
                                    const cvf_ranks* ranks,
                                    cvf_cvf_kind cvf_kind, unsigned workers);
/* Appends a partial-analysis report (and histograms) for each requested rank
   kind; both kinds share one probe batch. */
CVF_API cvf_status cvf_analyze_partial(cvf_analysis* analysis,
                                       const cvf_program* program,
                                       const cvf_sampling_config* config,
                                       cvf_cvf_kind cvf_kind, int want_max,
                                       int want_average);
CVF_API uint64_t cvf_analysis_report_count(const cvf_analysis* analysis);
CVF_API cvf_status cvf_analysis_report(const cvf_analysis* analysis,
                                       uint64_t i, cvf_report_data* out);
CVF_API cvf_status cvf_analysis_write_reports(const cvf_analysis* analysis,
                                              const char* path,
                                              cvf_format format);
CVF_API cvf_status cvf_analysis_write_histograms(const cvf_analysis* analysis,
                                                 const char* path,
                                                 cvf_format format);
CVF_API void cvf_analysis_free(cvf_analysis* analysis);

/* ---- simulation ---- */

typedef struct cvf_sim_config {
  const uint64_t* cvf_intervals; /* 0 disables injection */
  size_t interval_count;
  uint64_t runs_per_state;
  uint64_t step_threshold;
  uint64_t num_initial_states;
  uint64_t seed;
  unsigned workers;
} cvf_sim_config;

/* Defaults: one interval (8), 5 runs, threshold 10000, 50 states, seed 1. */
CVF_API void cvf_sim_config_default(cvf_sim_config* config);

typedef struct cvf_outcome_data {
  uint64_t cvf_interval;
  double baseline_steps;
  double convergence_steps;
  uint64_t converged_runs;
  uint64_t baseline_converged_runs;
  double ratio;
} cvf_outcome_data;

typedef struct cvf_simulation cvf_simulation;

CVF_API cvf_status cvf_simulate(const cvf_program* program,
                                const cvf_sim_config* config,
                                const char* program_label,
                                const char* topology_label,
                                cvf_simulation** out);
CVF_API uint64_t cvf_simulation_outcome_count(const cvf_simulation* sim);
CVF_API cvf_status cvf_simulation_outcome(const cvf_simulation* sim,
                                          uint64_t i, cvf_outcome_data* out);
CVF_API cvf_status cvf_simulation_write(const cvf_simulation* sim,
                                        const char* path, cvf_format format);
/* Per-run (baseline, with-cvf) step pairs. */
CVF_API cvf_status cvf_simulation_write_scatter(const cvf_simulation* sim,
                                                const char* path,
                                                cvf_format format);
CVF_API void cvf_simulation_free(cvf_simulation* sim);

#ifdef __cplusplus
}
#endif

#endif /* CVFLAB_CVFLAB_H_ */
