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

// cvflab command-line driver. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvflab/cvflab.h"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string program;
  std::string topology = "ring";
  std::string graph_file;
  std::uint64_t n = 0;
  std::uint64_t degree = 0;
  std::uint64_t attach = 0;
  std::string rank = "both";
  std::string cvf_kind = "feasible";
  std::uint64_t num_states = 0;
  std::uint64_t paths_per_state = 100;
  std::uint64_t walk_cap = 10000;
  std::vector<std::uint64_t> cvf_intervals{8};
  std::uint64_t runs_per_state = 5;
  std::uint64_t threshold = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out;
  std::string format = "csv";
  bool scatter = false;
  bool dump_ranks = false;
  std::string memory_budget = "8G";
};

// Failure carrying the process exit code.
struct Exit {
  int code;
};

int exit_code(cvf_status status) {
  switch (status) {
    case CVF_OK: return 0;
    case CVF_E_USAGE: return 2;
    case CVF_E_RESOURCE: return 3;
    case CVF_E_STABILIZATION: return 4;
    case CVF_E_IO: return 5;
    default: return 1;
  }
}

void check(cvf_status status, const std::string& hint = "") {
  if (status == CVF_OK) return;
  std::cerr << "cvflab: " << cvf_status_name(status) << " error: "
            << cvf_last_error() << '\n';
  if (!hint.empty()) std::cerr << "cvflab: " << hint << '\n';
  throw Exit{exit_code(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "cvflab: usage error: " << message << '\n';
  throw Exit{2};
}

// Unique-pointer wrappers over the C handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using Graph = Handle<cvf_graph, cvf_graph_free>;
using Program = Handle<cvf_program, cvf_program_free>;
using Space = Handle<cvf_space, cvf_space_free>;
using Ranks = Handle<cvf_ranks, cvf_ranks_free>;
using Analysis = Handle<cvf_analysis, cvf_analysis_free>;
using Simulation = Handle<cvf_simulation, cvf_simulation_free>;

std::uint64_t parse_bytes(const std::string& text) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    usage_error("bad --memory-budget '" + text + "'");
  }
  std::string suffix = text.substr(used);
  if (!suffix.empty() && (suffix.back() == 'B' || suffix.back() == 'b')) {
    suffix.pop_back();
  }
  int shift = 0;
  if (suffix == "K" || suffix == "k") shift = 10;
  else if (suffix == "M" || suffix == "m") shift = 20;
  else if (suffix == "G" || suffix == "g") shift = 30;
  else if (suffix == "T" || suffix == "t") shift = 40;
  else if (!suffix.empty()) usage_error("bad --memory-budget '" + text + "'");
  if (value == 0) usage_error("--memory-budget must be positive");
  if (shift && value > (UINT64_MAX >> shift)) {
    usage_error("--memory-budget '" + text + "' is too large");
  }
  return static_cast<std::uint64_t>(value) << shift;
}

cvf_format format_of(const Options& o) {
  return o.format == "json" ? CVF_FORMAT_JSON : CVF_FORMAT_CSV;
}

std::string ext(const Options& o) {
  return o.format == "json" ? ".json" : ".csv";
}

// FNV-1a over the canonical flag string; names default output directories.
std::string config_hash(const CLI::App& sub) {
  std::string canon = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--workers" || name == "--out" || name == "--help") continue;
    canon += '\n' + name + '=';
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) canon += r + ',';
    } else {
      canon += opt->get_default_str();
    }
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 12);
}

fs::path output_dir(const Options& o, const CLI::App& sub) {
  fs::path dir;
  if (!o.out.empty()) {
    dir = o.out;
  } else if (const char* env = std::getenv("CVFLAB_OUT"); env && *env) {
    dir = env;
  } else {
    dir = "cvflab-" + sub.get_name() + "-" + config_hash(sub);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "cvflab: io error: cannot create " << dir << ": "
              << ec.message() << '\n';
    throw Exit{5};
  }
  return dir;
}

// Builds the program named by --program over its communication graph.
// Returns the topology label used on emitted rows.
std::string build_program(const Options& o, Program& program) {
  Graph graph;
  std::string label;
  if (o.program == "token-ring") {
    if (!o.graph_file.empty() || o.topology != "ring") {
      usage_error("token-ring always runs on a ring; drop --topology/--graph-file");
    }
    if (o.n == 0) usage_error("--n is required");
    check(cvf_graph_generate("ring", o.n, 0, 0, o.seed, graph.out()));
    label = "ring";
  } else if (!o.graph_file.empty()) {
    check(cvf_graph_read(o.graph_file.c_str(), graph.out()));
    if (o.n != 0 && o.n != cvf_graph_node_count(graph.get())) {
      usage_error("--n disagrees with the node count of --graph-file");
    }
    label = "edge-list";
  } else {
    if (o.n == 0) usage_error("--n is required");
    check(cvf_graph_generate(o.topology.c_str(), o.n, o.degree, o.attach,
                             o.seed, graph.out()));
    label = o.topology;
  }
  check(cvf_program_create(o.program.c_str(), graph.get(), program.out()));
  return label;
}

cvf_cvf_kind cvf_kind_of(const Options& o) {
  return o.cvf_kind == "max" ? CVF_CVF_MAX : CVF_CVF_FEASIBLE;
}

void print_reports(const cvf_analysis* analysis) {
  for (std::uint64_t i = 0; i < cvf_analysis_report_count(analysis); ++i) {
    cvf_report_data r;
    check(cvf_analysis_report(analysis, i, &r));
    std::printf("%-12s %-7s effect_prog=%-10.6g effect_cvf=%-10.6g "
                "rel_cvf=%-8.6g fit_B=%.6g r2=%.6g\n",
                r.rank_kind == CVF_RANK_MAX ? "max-rank" : "average-rank",
                r.partial ? "partial" : "full", r.effect_prog, r.effect_cvf,
                r.rel_cvf, r.fit_B, r.fit_r2);
  }
}

void write_analysis(const Options& o, const fs::path& dir,
                    const cvf_analysis* analysis) {
  const auto report = (dir / ("report" + ext(o))).string();
  const auto hist = (dir / ("histogram" + ext(o))).string();
  check(cvf_analysis_write_reports(analysis, report.c_str(), format_of(o)));
  check(cvf_analysis_write_histograms(analysis, hist.c_str(), format_of(o)));
  print_reports(analysis);
  std::printf("wrote %s and %s\n", report.c_str(), hist.c_str());
}

void cmd_gen_graph(const Options& o) {
  if (o.n == 0) usage_error("--n is required");
  Graph graph;
  check(cvf_graph_generate(o.topology.c_str(), o.n, o.degree, o.attach,
                           o.seed, graph.out()));
  if (o.out.empty()) {
    for (std::uint64_t i = 0; i < cvf_graph_edge_count(graph.get()); ++i) {
      std::uint32_t u = 0;
      std::uint32_t v = 0;
      check(cvf_graph_edge(graph.get(), i, &u, &v));
      std::printf("%u %u\n", u, v);
    }
    return;
  }
  check(cvf_graph_write(graph.get(), o.out.c_str()));
}

void cmd_analyze_full(const Options& o, const CLI::App& sub) {
  const std::uint64_t budget = parse_bytes(o.memory_budget);
  Program program;
  const auto topology = build_program(o, program);
  Space space;
  check(cvf_space_enumerate(program.get(), budget, o.workers, space.out()),
        "the state space is too large for full analysis; use analyze-partial "
        "or raise --memory-budget");
  const fs::path dir = output_dir(o, sub);

  Analysis analysis;
  check(cvf_analysis_create(o.program.c_str(), topology.c_str(),
                            cvf_program_process_count(program.get()),
                            analysis.out()));
  std::vector<cvf_rank_kind> kinds;
  if (o.rank != "avg") kinds.push_back(CVF_RANK_MAX);
  if (o.rank != "max") kinds.push_back(CVF_RANK_AVERAGE);
  for (cvf_rank_kind kind : kinds) {
    Ranks ranks;
    check(cvf_ranks_compute(space.get(), kind, o.workers, ranks.out()));
    if (o.dump_ranks) {
      const auto path =
          (dir / (kind == CVF_RANK_MAX ? "ranks-max.cvfr" : "ranks-avg.cvfr"))
              .string();
      check(cvf_ranks_dump(ranks.get(), path.c_str()));
    }
    check(cvf_analyze_full(analysis.get(), space.get(), ranks.get(),
                           cvf_kind_of(o), o.workers));
  }
  write_analysis(o, dir, analysis.get());
}

void cmd_analyze_partial(const Options& o, const CLI::App& sub) {
  Program program;
  const auto topology = build_program(o, program);
  cvf_sampling_config config;
  cvf_sampling_config_default(&config);
  if (o.num_states != 0) config.num_states = o.num_states;
  config.paths_per_state = o.paths_per_state;
  config.walk_cap = o.walk_cap;
  config.seed = o.seed;
  config.workers = o.workers;

  Analysis analysis;
  check(cvf_analysis_create(o.program.c_str(), topology.c_str(),
                            cvf_program_process_count(program.get()),
                            analysis.out()));
  check(cvf_analyze_partial(analysis.get(), program.get(), &config,
                            cvf_kind_of(o), o.rank != "avg", o.rank != "max"));
  write_analysis(o, output_dir(o, sub), analysis.get());
}

void cmd_simulate(const Options& o, const CLI::App& sub) {
  Program program;
  const auto topology = build_program(o, program);
  cvf_sim_config config;
  cvf_sim_config_default(&config);
  config.cvf_intervals = o.cvf_intervals.data();
  config.interval_count = o.cvf_intervals.size();
  config.runs_per_state = o.runs_per_state;
  config.step_threshold = o.threshold;
  if (o.num_states != 0) config.num_initial_states = o.num_states;
  config.seed = o.seed;
  config.workers = o.workers;

  Simulation sim;
  check(cvf_simulate(program.get(), &config, o.program.c_str(),
                     topology.c_str(), sim.out()));
  const fs::path dir = output_dir(o, sub);
  const auto path = (dir / ("simulation" + ext(o))).string();
  check(cvf_simulation_write(sim.get(), path.c_str(), format_of(o)));
  std::printf("wrote %s (%llu rows)\n", path.c_str(),
              static_cast<unsigned long long>(
                  cvf_simulation_outcome_count(sim.get())));
  if (o.scatter) {
    const auto scatter = (dir / ("scatter" + ext(o))).string();
    check(cvf_simulation_write_scatter(sim.get(), scatter.c_str(),
                                       format_of(o)));
    std::printf("wrote %s\n", scatter.c_str());
  }
}

void add_program_flags(CLI::App* sub, Options& o) {
  sub->add_option("--program", o.program, "token-ring, coloring or matching")
      ->required()
      ->check(CLI::IsMember({"token-ring", "coloring", "matching"}));
  sub->add_option("--topology", o.topology,
                  "ring, power-law or random-regular")
      ->check(CLI::IsMember({"ring", "power-law", "random-regular"}))
      ->capture_default_str();
  sub->add_option("--graph-file", o.graph_file, "edge list to run on")
      ->excludes("--topology");
  sub->add_option("--n", o.n, "number of processes");
  sub->add_option("--degree", o.degree, "random-regular degree");
  sub->add_option("--attach", o.attach, "power-law edges per new node");
  sub->add_option("--seed", o.seed, "seed for every random choice")
      ->capture_default_str();
  sub->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  sub->add_option("--out", o.out, "output directory (else $CVFLAB_OUT)");
  sub->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_analysis_flags(CLI::App* sub, Options& o) {
  sub->add_option("--rank", o.rank, "max, avg or both")
      ->check(CLI::IsMember({"max", "avg", "both"}))
      ->capture_default_str();
  sub->add_option("--cvf-kind", o.cvf_kind, "max or feasible")
      ->check(CLI::IsMember({"max", "feasible"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvflab: rank-effect analysis and simulation of "
               "consistency violation faults in stabilizing programs"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-graph", "generate a communication graph");
  gen->add_option("--topology", o.topology, "ring, power-law or random-regular")
      ->required()
      ->check(CLI::IsMember({"ring", "power-law", "random-regular"}));
  gen->add_option("--n", o.n, "number of nodes")->required();
  gen->add_option("--degree", o.degree, "random-regular degree");
  gen->add_option("--attach", o.attach, "power-law edges per new node");
  gen->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  gen->add_option("--out", o.out, "edge-list file (default: stdout)");

  auto* full = app.add_subcommand("analyze-full",
                                  "exact analysis over the whole state space");
  add_program_flags(full, o);
  add_analysis_flags(full, o);
  full->add_option("--memory-budget", o.memory_budget,
                   "refuse spaces estimated above this (e.g. 8G)")
      ->capture_default_str();
  full->add_flag("--dump-ranks", o.dump_ranks,
                 "also write binary rank tables (ranks-*.cvfr)");

  auto* partial = app.add_subcommand(
      "analyze-partial", "sampled analysis without building the state space");
  add_program_flags(partial, o);
  add_analysis_flags(partial, o);
  partial->add_option("--num-states", o.num_states,
                      "sampled origin states (default 1000)");
  partial->add_option("--paths-per-state", o.paths_per_state,
                      "random walks per probed state")
      ->capture_default_str();
  partial->add_option("--walk-cap", o.walk_cap, "maximum steps per walk")
      ->capture_default_str();

  auto* sim = app.add_subcommand("simulate",
                                 "convergence simulation with injected cvfs");
  add_program_flags(sim, o);
  sim->add_option("--cvf-interval", o.cvf_intervals,
                  "mean program steps between cvfs; 0 disables (list)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--runs-per-state", o.runs_per_state, "runs per state")
      ->capture_default_str();
  sim->add_option("--threshold", o.threshold, "iteration cap per run")
      ->capture_default_str();
  sim->add_option("--num-states", o.num_states,
                  "sampled initial states (default 50)");
  sim->add_flag("--scatter", o.scatter, "also write per-run scatter pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) cmd_gen_graph(o);
    if (*full) cmd_analyze_full(o, *full);
    if (*partial) cmd_analyze_partial(o, *partial);
    if (*sim) cmd_simulate(o, *sim);
  } catch (const Exit& e) {
    return e.code;
  }
  return 0;
}
