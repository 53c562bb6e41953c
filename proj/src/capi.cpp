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

#include "cvflab/cvflab.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "cvflab/case_studies.hpp"
#include "cvflab/cvf_analysis.hpp"
#include "cvflab/emit.hpp"
#include "cvflab/error.hpp"
#include "cvflab/graph_gen.hpp"
#include "cvflab/sampling.hpp"
#include "cvflab/simulation.hpp"
#include "cvflab/state_space.hpp"

struct cvf_graph {
  cvflab::CommGraph graph;
};

struct cvf_program {
  cvflab::StabilizingProgram program;
};

struct cvf_space {
  cvflab::StateSpace space;
};

struct cvf_ranks {
  cvflab::RankTable table;
};

struct cvf_analysis {
  cvflab::RunLabel label;
  std::vector<cvflab::AnalysisReport> reports;
  std::vector<cvflab::RankEffectHistogram> histograms;
};

struct cvf_simulation {
  cvflab::RunLabel label;
  std::vector<cvflab::SimOutcome> outcomes;
};

namespace {

thread_local std::string last_error;

cvf_status status_of(cvflab::ErrorKind kind) {
  using cvflab::ErrorKind;
  switch (kind) {
    case ErrorKind::kUsage: return CVF_E_USAGE;
    case ErrorKind::kContract: return CVF_E_CONTRACT;
    case ErrorKind::kResource: return CVF_E_RESOURCE;
    case ErrorKind::kStabilization: return CVF_E_STABILIZATION;
    case ErrorKind::kIo: return CVF_E_IO;
    case ErrorKind::kDegenerate: return CVF_E_DEGENERATE;
    case ErrorKind::kFit: return CVF_E_FIT;
    case ErrorKind::kGeneration: return CVF_E_GENERATION;
    case ErrorKind::kEmpty: return CVF_E_EMPTY;
    case ErrorKind::kUnreachable: return CVF_E_UNREACHABLE;
  }
  return CVF_E_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread's message.
template <class Fn>
cvf_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return CVF_OK;
  } catch (const cvflab::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CVF_E_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CVF_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CVF_E_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) {
    cvflab::fail(cvflab::ErrorKind::kUsage, std::string(what) + " is NULL");
  }
}

cvflab::Format format_of(cvf_format format) {
  switch (format) {
    case CVF_FORMAT_CSV: return cvflab::Format::kCsv;
    case CVF_FORMAT_JSON: return cvflab::Format::kJson;
  }
  cvflab::fail(cvflab::ErrorKind::kUsage, "unknown output format");
}

cvflab::CvfKind cvf_kind_of(cvf_cvf_kind kind) {
  switch (kind) {
    case CVF_CVF_MAX: return cvflab::CvfKind::kMax;
    case CVF_CVF_FEASIBLE: return cvflab::CvfKind::kFeasible;
  }
  cvflab::fail(cvflab::ErrorKind::kUsage, "unknown cvf kind");
}

void store(cvflab::FullAnalysis&& result, cvf_analysis* analysis) {
  analysis->reports.push_back(result.report);
  analysis->histograms.push_back(std::move(result.program_histogram));
  analysis->histograms.push_back(std::move(result.cvf_histogram));
}

}  // namespace

extern "C" {

const char* cvf_version(void) { return "0.1.0"; }

const char* cvf_status_name(cvf_status status) {
  switch (status) {
    case CVF_OK: return "ok";
    case CVF_E_USAGE: return "usage";
    case CVF_E_CONTRACT: return "contract";
    case CVF_E_RESOURCE: return "resource";
    case CVF_E_STABILIZATION: return "stabilization-violation";
    case CVF_E_IO: return "io";
    case CVF_E_DEGENERATE: return "degenerate-report";
    case CVF_E_FIT: return "fit";
    case CVF_E_GENERATION: return "generation";
    case CVF_E_EMPTY: return "empty";
    case CVF_E_UNREACHABLE: return "unreachable-invariant";
    case CVF_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cvf_last_error(void) { return last_error.c_str(); }

cvf_status cvf_graph_generate(const char* topology, uint64_t n,
                              uint64_t degree, uint64_t attach, uint64_t seed,
                              cvf_graph** out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    cvflab::GraphSpec spec;
    spec.topology = cvflab::parse_topology(topology);
    spec.n = n;
    spec.degree = degree;
    spec.attach = attach;
    spec.seed = seed;
    *out = new cvf_graph{cvflab::generate(spec)};
  });
}

cvf_status cvf_graph_read(const char* path, cvf_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new cvf_graph{cvflab::read_edge_list(std::filesystem::path(path))};
  });
}

cvf_status cvf_graph_write(const cvf_graph* graph, const char* path) {
  return guarded([&] {
    require(graph, "graph");
    require(path, "path");
    cvflab::write_edge_list(graph->graph, std::filesystem::path(path));
  });
}

uint64_t cvf_graph_node_count(const cvf_graph* graph) {
  return graph ? graph->graph.node_count() : 0;
}

uint64_t cvf_graph_edge_count(const cvf_graph* graph) {
  return graph ? graph->graph.edge_count() : 0;
}

cvf_status cvf_graph_edge(const cvf_graph* graph, uint64_t i, uint32_t* u,
                          uint32_t* v) {
  return guarded([&] {
    require(graph, "graph");
    require(u, "u");
    require(v, "v");
    const auto edges = graph->graph.edges();
    if (i >= edges.size()) {
      cvflab::fail(cvflab::ErrorKind::kUsage,
                   "edge index " + std::to_string(i) + " out of range");
    }
    *u = edges[i].first;
    *v = edges[i].second;
  });
}

void cvf_graph_free(cvf_graph* graph) { delete graph; }

cvf_status cvf_program_create(const char* name, const cvf_graph* graph,
                              cvf_program** out) {
  return guarded([&] {
    require(name, "name");
    require(graph, "graph");
    require(out, "out");
    *out = new cvf_program{cvflab::make_program(name, graph->graph)};
  });
}

uint64_t cvf_program_process_count(const cvf_program* program) {
  return program ? program->program.process_count() : 0;
}

cvf_status cvf_program_state_count(const cvf_program* program, uint64_t* out) {
  return guarded([&] {
    require(program, "program");
    require(out, "out");
    const auto count = program->program.state_count();
    if (!count) {
      cvflab::fail(cvflab::ErrorKind::kResource,
                   "|S_p| = " + program->program.state_count_string() +
                       " does not fit in 64 bits");
    }
    *out = *count;
  });
}

void cvf_program_free(cvf_program* program) { delete program; }

cvf_status cvf_space_enumerate(const cvf_program* program,
                               uint64_t memory_budget, unsigned workers,
                               cvf_space** out) {
  return guarded([&] {
    require(program, "program");
    require(out, "out");
    cvflab::SpaceOptions options;
    if (memory_budget != 0) options.memory_budget = memory_budget;
    options.workers = workers;
    *out = new cvf_space{cvflab::enumerate(program->program, options)};
  });
}

uint64_t cvf_space_state_count(const cvf_space* space) {
  return space ? space->space.state_count() : 0;
}

uint64_t cvf_space_invariant_count(const cvf_space* space) {
  return space ? space->space.invariant_count() : 0;
}

void cvf_space_free(cvf_space* space) { delete space; }

cvf_status cvf_ranks_compute(const cvf_space* space, cvf_rank_kind kind,
                             unsigned workers, cvf_ranks** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    if (kind != CVF_RANK_MAX && kind != CVF_RANK_AVERAGE) {
      cvflab::fail(cvflab::ErrorKind::kUsage, "unknown rank kind");
    }
    *out = new cvf_ranks{cvflab::compute_ranks(
        space->space,
        kind == CVF_RANK_MAX ? cvflab::RankKind::kMax
                             : cvflab::RankKind::kAverage,
        workers)};
  });
}

cvf_status cvf_ranks_get(const cvf_ranks* ranks, uint64_t state, double* out) {
  return guarded([&] {
    require(ranks, "ranks");
    require(out, "out");
    if (state >= ranks->table.state_count()) {
      cvflab::fail(cvflab::ErrorKind::kUsage,
                   "state index " + std::to_string(state) + " out of range");
    }
    *out = ranks->table.rank(state);
  });
}

cvf_status cvf_ranks_dump(const cvf_ranks* ranks, const char* path) {
  return guarded([&] {
    require(ranks, "ranks");
    require(path, "path");
    cvflab::write_rank_dump(ranks->table, path);
  });
}

void cvf_ranks_free(cvf_ranks* ranks) { delete ranks; }

void cvf_sampling_config_default(cvf_sampling_config* config) {
  if (config == nullptr) return;
  const cvflab::SamplingConfig d;
  config->num_states = d.num_states;
  config->paths_per_state = d.paths_per_state;
  config->walk_cap = d.walk_cap;
  config->seed = d.seed;
  config->workers = d.workers;
}

cvf_status cvf_analysis_create(const char* program_label,
                               const char* topology_label, uint64_t n,
                               cvf_analysis** out) {
  return guarded([&] {
    require(program_label, "program_label");
    require(topology_label, "topology_label");
    require(out, "out");
    *out = new cvf_analysis{{program_label, topology_label, n}, {}, {}};
  });
}

cvf_status cvf_analyze_full(cvf_analysis* analysis, const cvf_space* space,
                            const cvf_ranks* ranks, cvf_cvf_kind cvf_kind,
                            unsigned workers) {
  return guarded([&] {
    require(analysis, "analysis");
    require(space, "space");
    require(ranks, "ranks");
    store(cvflab::analyze_full(space->space, ranks->table,
                               cvf_kind_of(cvf_kind), workers),
          analysis);
  });
}

cvf_status cvf_analyze_partial(cvf_analysis* analysis,
                               const cvf_program* program,
                               const cvf_sampling_config* config,
                               cvf_cvf_kind cvf_kind, int want_max,
                               int want_average) {
  return guarded([&] {
    require(analysis, "analysis");
    require(program, "program");
    require(config, "config");
    cvflab::SamplingConfig c;
    c.num_states = config->num_states;
    c.paths_per_state = config->paths_per_state;
    c.walk_cap = config->walk_cap;
    c.seed = config->seed;
    c.workers = config->workers;
    const auto result =
        cvflab::partial_analysis(program->program, c, cvf_kind_of(cvf_kind));
    // Compute every requested kind before storing so a failure leaves the
    // analysis unchanged.
    std::vector<cvflab::FullAnalysis> parts;
    if (want_max) parts.push_back(result.result(cvflab::RankKind::kMax));
    if (want_average) {
      parts.push_back(result.result(cvflab::RankKind::kAverage));
    }
    for (auto& p : parts) store(std::move(p), analysis);
  });
}

uint64_t cvf_analysis_report_count(const cvf_analysis* analysis) {
  return analysis ? analysis->reports.size() : 0;
}

cvf_status cvf_analysis_report(const cvf_analysis* analysis, uint64_t i,
                               cvf_report_data* out) {
  return guarded([&] {
    require(analysis, "analysis");
    require(out, "out");
    if (i >= analysis->reports.size()) {
      cvflab::fail(cvflab::ErrorKind::kUsage,
                   "report index " + std::to_string(i) + " out of range");
    }
    const auto& r = analysis->reports[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = cvf_report_data{
        r.rank_kind == cvflab::RankKind::kMax ? CVF_RANK_MAX : CVF_RANK_AVERAGE,
        r.analysis_kind == cvflab::AnalysisKind::kPartial ? 1 : 0,
        r.effect_prog,
        r.effect_cvf,
        r.rel_cvf,
        r.fit ? 1 : 0,
        r.fit ? r.fit->A : nan,
        r.fit ? r.fit->B : nan,
        r.fit ? r.fit->r2 : nan};
  });
}

cvf_status cvf_analysis_write_reports(const cvf_analysis* analysis,
                                      const char* path, cvf_format format) {
  return guarded([&] {
    require(analysis, "analysis");
    require(path, "path");
    const auto f = format_of(format);
    cvflab::write_file(path, [&](std::ostream& out) {
      cvflab::write_reports(out, analysis->label, analysis->reports, f);
    });
  });
}

cvf_status cvf_analysis_write_histograms(const cvf_analysis* analysis,
                                         const char* path, cvf_format format) {
  return guarded([&] {
    require(analysis, "analysis");
    require(path, "path");
    const auto f = format_of(format);
    cvflab::write_file(path, [&](std::ostream& out) {
      cvflab::write_histograms(out, analysis->histograms, f);
    });
  });
}

void cvf_analysis_free(cvf_analysis* analysis) { delete analysis; }

void cvf_sim_config_default(cvf_sim_config* config) {
  if (config == nullptr) return;
  static const uint64_t kDefaultInterval = 8;
  const cvflab::SimConfig d;
  config->cvf_intervals = &kDefaultInterval;
  config->interval_count = 1;
  config->runs_per_state = d.runs_per_state;
  config->step_threshold = d.step_threshold;
  config->num_initial_states = d.num_initial_states;
  config->seed = d.seed;
  config->workers = d.workers;
}

cvf_status cvf_simulate(const cvf_program* program,
                        const cvf_sim_config* config,
                        const char* program_label, const char* topology_label,
                        cvf_simulation** out) {
  return guarded([&] {
    require(program, "program");
    require(config, "config");
    require(program_label, "program_label");
    require(topology_label, "topology_label");
    require(out, "out");
    if (config->interval_count > 0) require(config->cvf_intervals, "cvf_intervals");
    cvflab::SimConfig c;
    c.cvf_intervals.assign(config->cvf_intervals,
                           config->cvf_intervals + config->interval_count);
    c.runs_per_state = config->runs_per_state;
    c.step_threshold = config->step_threshold;
    c.num_initial_states = config->num_initial_states;
    c.seed = config->seed;
    c.workers = config->workers;
    auto outcomes = cvflab::run_campaign(program->program, c);
    *out = new cvf_simulation{
        {program_label, topology_label, program->program.process_count()},
        std::move(outcomes)};
  });
}

uint64_t cvf_simulation_outcome_count(const cvf_simulation* sim) {
  return sim ? sim->outcomes.size() : 0;
}

cvf_status cvf_simulation_outcome(const cvf_simulation* sim, uint64_t i,
                                  cvf_outcome_data* out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    if (i >= sim->outcomes.size()) {
      cvflab::fail(cvflab::ErrorKind::kUsage,
                   "outcome index " + std::to_string(i) + " out of range");
    }
    const auto& o = sim->outcomes[i];
    *out = cvf_outcome_data{o.cvf_interval,      o.baseline_steps,
                            o.convergence_steps, o.converged_runs,
                            o.baseline_converged_runs, o.ratio};
  });
}

cvf_status cvf_simulation_write(const cvf_simulation* sim, const char* path,
                                cvf_format format) {
  return guarded([&] {
    require(sim, "sim");
    require(path, "path");
    const auto f = format_of(format);
    cvflab::write_file(path, [&](std::ostream& out) {
      cvflab::write_simulation(out, sim->label, sim->outcomes, f);
    });
  });
}

cvf_status cvf_simulation_write_scatter(const cvf_simulation* sim,
                                        const char* path, cvf_format format) {
  return guarded([&] {
    require(sim, "sim");
    require(path, "path");
    const auto f = format_of(format);
    cvflab::write_file(path, [&](std::ostream& out) {
      cvflab::write_scatter(out, sim->label, sim->outcomes, f);
    });
  });
}

void cvf_simulation_free(cvf_simulation* sim) { delete sim; }

}  // extern "C"
