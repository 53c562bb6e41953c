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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cvflab/cvflab.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("cvflab_capi_" + std::to_string(::testing::UnitTest::GetInstance()
                                                ->random_seed()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const char* name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

TEST_F(CApi, StatusNames) {
  EXPECT_STREQ(cvf_status_name(CVF_OK), "ok");
  EXPECT_STREQ(cvf_status_name(CVF_E_RESOURCE), "resource");
  EXPECT_NE(std::strlen(cvf_version()), 0u);
}

TEST_F(CApi, GraphLifecycle) {
  cvf_graph* g = nullptr;
  ASSERT_EQ(cvf_graph_generate("random-regular", 4, 3, 0, 1, &g), CVF_OK);
  EXPECT_EQ(cvf_graph_node_count(g), 4u);
  EXPECT_EQ(cvf_graph_edge_count(g), 6u);
  uint32_t u = 9, v = 9;
  ASSERT_EQ(cvf_graph_edge(g, 0, &u, &v), CVF_OK);
  EXPECT_EQ(u, 0u);
  EXPECT_EQ(v, 1u);
  EXPECT_EQ(cvf_graph_edge(g, 6, &u, &v), CVF_E_USAGE);

  ASSERT_EQ(cvf_graph_write(g, path("k4.txt").c_str()), CVF_OK);
  cvf_graph* h = nullptr;
  ASSERT_EQ(cvf_graph_read(path("k4.txt").c_str(), &h), CVF_OK);
  EXPECT_EQ(cvf_graph_edge_count(h), 6u);
  cvf_graph_free(h);
  cvf_graph_free(g);
}

TEST_F(CApi, ErrorsCarryMessages) {
  cvf_graph* g = nullptr;
  EXPECT_EQ(cvf_graph_generate("random-regular", 4, 5, 0, 1, &g), CVF_E_USAGE);
  EXPECT_EQ(g, nullptr);
  EXPECT_NE(std::string(cvf_last_error()), "");
  EXPECT_EQ(cvf_graph_read(path("missing.txt").c_str(), &g), CVF_E_IO);
  EXPECT_NE(std::string(cvf_last_error()).find("missing.txt"), std::string::npos);
  EXPECT_EQ(cvf_graph_generate("ring", 5, 0, 0, 1, nullptr), CVF_E_USAGE);
}

TEST_F(CApi, FullAnalysisPipeline) {
  cvf_graph* g = nullptr;
  ASSERT_EQ(cvf_graph_generate("ring", 5, 0, 0, 1, &g), CVF_OK);
  cvf_program* p = nullptr;
  ASSERT_EQ(cvf_program_create("token-ring", g, &p), CVF_OK);
  uint64_t count = 0;
  ASSERT_EQ(cvf_program_state_count(p, &count), CVF_OK);
  EXPECT_EQ(count, 243u);

  cvf_space* tiny = nullptr;
  EXPECT_EQ(cvf_space_enumerate(p, 1000, 1, &tiny), CVF_E_RESOURCE);

  cvf_space* s = nullptr;
  ASSERT_EQ(cvf_space_enumerate(p, 0, 2, &s), CVF_OK);
  EXPECT_EQ(cvf_space_state_count(s), 243u);
  EXPECT_GT(cvf_space_invariant_count(s), 0u);

  cvf_analysis* a = nullptr;
  ASSERT_EQ(cvf_analysis_create("token-ring", "ring", 5, &a), CVF_OK);
  for (auto kind : {CVF_RANK_MAX, CVF_RANK_AVERAGE}) {
    cvf_ranks* r = nullptr;
    ASSERT_EQ(cvf_ranks_compute(s, kind, 2, &r), CVF_OK);
    double value = -1;
    ASSERT_EQ(cvf_ranks_get(r, 0, &value), CVF_OK);
    EXPECT_EQ(value, 0.0);
    EXPECT_EQ(cvf_ranks_get(r, 243, &value), CVF_E_USAGE);
    ASSERT_EQ(cvf_analyze_full(a, s, r, CVF_CVF_FEASIBLE, 2), CVF_OK);
    cvf_ranks_free(r);
  }
  ASSERT_EQ(cvf_analysis_report_count(a), 2u);
  cvf_report_data d{};
  ASSERT_EQ(cvf_analysis_report(a, 1, &d), CVF_OK);
  EXPECT_EQ(d.rank_kind, CVF_RANK_AVERAGE);
  EXPECT_EQ(d.partial, 0);
  EXPECT_GT(d.rel_cvf, 0.0);
  EXPECT_LT(d.effect_prog, 0.0);
  EXPECT_EQ(cvf_analysis_report(a, 2, &d), CVF_E_USAGE);

  ASSERT_EQ(cvf_analysis_write_reports(a, path("report.csv").c_str(),
                                       CVF_FORMAT_CSV),
            CVF_OK);
  ASSERT_EQ(cvf_analysis_write_histograms(a, path("histogram.json").c_str(),
                                          CVF_FORMAT_JSON),
            CVF_OK);
  const auto report = slurp(path("report.csv"));
  EXPECT_EQ(report.rfind("program,topology,n,rank_kind", 0), 0u);
  EXPECT_NE(report.find("token-ring,ring,5,max-rank,full,"), std::string::npos);
  EXPECT_EQ(slurp(path("histogram.json")).front(), '[');

  cvf_analysis_free(a);
  cvf_space_free(s);
  cvf_program_free(p);
  cvf_graph_free(g);
}

TEST_F(CApi, UnknownProgramIsUsageError) {
  cvf_graph* g = nullptr;
  ASSERT_EQ(cvf_graph_generate("random-regular", 6, 3, 0, 2, &g), CVF_OK);
  cvf_program* p = nullptr;
  ASSERT_EQ(cvf_program_create("coloring", g, &p), CVF_OK);
  cvf_program* bad = nullptr;
  EXPECT_EQ(cvf_program_create("no-such-program", g, &bad), CVF_E_USAGE);
  cvf_program_free(p);
  cvf_graph_free(g);
  EXPECT_STREQ(cvf_status_name(CVF_E_STABILIZATION), "stabilization-violation");
}

TEST_F(CApi, PartialAnalysisIsDeterministic) {
  cvf_graph* g = nullptr;
  ASSERT_EQ(cvf_graph_generate("ring", 6, 0, 0, 1, &g), CVF_OK);
  cvf_program* p = nullptr;
  ASSERT_EQ(cvf_program_create("coloring", g, &p), CVF_OK);
  cvf_sampling_config c;
  cvf_sampling_config_default(&c);
  EXPECT_EQ(c.num_states, 1000u);
  EXPECT_EQ(c.paths_per_state, 100u);
  EXPECT_EQ(c.walk_cap, 10000u);
  c.num_states = 100;
  c.paths_per_state = 20;

  std::string bodies[2];
  for (unsigned w : {1u, 3u}) {
    c.workers = w;
    cvf_analysis* a = nullptr;
    ASSERT_EQ(cvf_analysis_create("coloring", "ring", 6, &a), CVF_OK);
    ASSERT_EQ(cvf_analyze_partial(a, p, &c, CVF_CVF_FEASIBLE, 1, 1), CVF_OK);
    ASSERT_EQ(cvf_analysis_report_count(a), 2u);
    cvf_report_data d{};
    ASSERT_EQ(cvf_analysis_report(a, 0, &d), CVF_OK);
    EXPECT_EQ(d.partial, 1);
    const auto out = path(w == 1 ? "a.csv" : "b.csv");
    ASSERT_EQ(cvf_analysis_write_reports(a, out.c_str(), CVF_FORMAT_CSV), CVF_OK);
    bodies[w == 1 ? 0 : 1] = slurp(out);
    cvf_analysis_free(a);
  }
  EXPECT_EQ(bodies[0], bodies[1]);
  EXPECT_NE(bodies[0].find(",partial,"), std::string::npos);

  c.paths_per_state = 0;
  cvf_analysis* a = nullptr;
  ASSERT_EQ(cvf_analysis_create("coloring", "ring", 6, &a), CVF_OK);
  EXPECT_EQ(cvf_analyze_partial(a, p, &c, CVF_CVF_FEASIBLE, 1, 1), CVF_E_USAGE);
  cvf_analysis_free(a);
  cvf_program_free(p);
  cvf_graph_free(g);
}

TEST_F(CApi, Simulation) {
  cvf_graph* g = nullptr;
  ASSERT_EQ(cvf_graph_generate("ring", 5, 0, 0, 1, &g), CVF_OK);
  cvf_program* p = nullptr;
  ASSERT_EQ(cvf_program_create("matching", g, &p), CVF_OK);
  cvf_sim_config c;
  cvf_sim_config_default(&c);
  EXPECT_EQ(c.runs_per_state, 5u);
  EXPECT_EQ(c.step_threshold, 10000u);
  const uint64_t intervals[] = {0, 2};
  c.cvf_intervals = intervals;
  c.interval_count = 2;
  c.num_initial_states = 4;
  cvf_simulation* sim = nullptr;
  ASSERT_EQ(cvf_simulate(p, &c, "matching", "ring", &sim), CVF_OK);
  ASSERT_EQ(cvf_simulation_outcome_count(sim), 8u);
  for (uint64_t i = 0; i < 8; ++i) {
    cvf_outcome_data d{};
    ASSERT_EQ(cvf_simulation_outcome(sim, i, &d), CVF_OK);
    EXPECT_EQ(d.baseline_converged_runs, 5u);
    if (d.cvf_interval == 0) EXPECT_EQ(d.ratio, 1.0);
  }
  ASSERT_EQ(cvf_simulation_write(sim, path("simulation.csv").c_str(),
                                 CVF_FORMAT_CSV),
            CVF_OK);
  ASSERT_EQ(cvf_simulation_write_scatter(sim, path("scatter.csv").c_str(),
                                         CVF_FORMAT_CSV),
            CVF_OK);
  const auto scatter = slurp(path("scatter.csv"));
  EXPECT_EQ(std::count(scatter.begin(), scatter.end(), '\n'), 1 + 8 * 5);
  cvf_simulation_free(sim);
  cvf_program_free(p);
  cvf_graph_free(g);
}

}  // namespace
