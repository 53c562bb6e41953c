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

#include <numeric>
#include <vector>

#include "cvflab/case_studies.hpp"
#include "cvflab/error.hpp"
#include "cvflab/simulation.hpp"
#include "cvflab/state_space.hpp"

namespace cvflab {
namespace {

CommGraph path2() {
  const std::vector<Edge> e{{0, 1}};
  return CommGraph::from_edges(2, e);
}

TEST(RunOne, InvariantStartIsImmediate) {
  const auto p = coloring_program(CommGraph::ring(4));
  const ProgramState s{0, 1, 0, 1};
  ASSERT_TRUE(in_invariant(p, s));
  EXPECT_EQ(run_one(p, s, 0, 100, 1), (RunResult{0, true}));
  EXPECT_EQ(run_one(p, s, 1, 100, 1), (RunResult{0, true}));
}

TEST(RunOne, TwoNodeConflictTakesOneStep) {
  const auto p = coloring_program(path2());
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    EXPECT_EQ(run_one(p, {0, 0}, 0, 100, seed), (RunResult{1, true}));
  }
}

TEST(RunOne, BaselineAlwaysConvergesOnTokenRing5) {
  const auto p = token_ring_program(5);
  const auto space = enumerate(p);
  for (StateIndex s = 0; s < space.state_count(); ++s) {
    const auto r = run_one(p, p.state_at(s), 0, 10000, s + 1);
    ASSERT_TRUE(r.converged);
    ASSERT_EQ(r.steps == 0, space.in_invariant(s));
  }
}

TEST(RunOne, Deterministic) {
  const auto p = matching_program(CommGraph::ring(7));
  const ProgramState s(7, 0);
  EXPECT_EQ(run_one(p, s, 2, 10000, 42), run_one(p, s, 2, 10000, 42));
}

TEST(RunOne, ThresholdCapsSteps) {
  const auto p = token_ring_program(9);
  const auto starts = sample_initial_states(p, 5, 3);
  for (const auto& s : starts) {
    const auto r = run_one(p, s, 1, 3, 1);
    EXPECT_LE(r.steps, 3u);
    if (!r.converged) EXPECT_EQ(r.steps, 3u);
  }
}

TEST(Initial, SampledStatesAreOutsideInvariant) {
  const auto p = coloring_program(CommGraph::ring(5));
  const auto a = sample_initial_states(p, 30, 8);
  ASSERT_EQ(a.size(), 30u);
  for (const auto& s : a) EXPECT_FALSE(in_invariant(p, s));
  EXPECT_EQ(a, sample_initial_states(p, 30, 8));
  EXPECT_NE(a, sample_initial_states(p, 30, 9));
}

TEST(Config, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(validate(c));
  c.step_threshold = 0;
  EXPECT_THROW(validate(c), Error);
  c = {};
  c.runs_per_state = 0;
  EXPECT_THROW(validate(c), Error);
}

TEST(Campaign, IntervalZeroEqualsBaseline) {
  const auto p = token_ring_program(6);
  SimConfig c;
  c.cvf_intervals = {0, 4};
  c.num_initial_states = 6;
  c.seed = 11;
  const auto out = run_campaign(p, c);
  ASSERT_EQ(out.size(), 12u);
  for (const auto& o : out) {
    EXPECT_EQ(o.runs.size(), c.runs_per_state);
    EXPECT_EQ(o.baseline_runs.size(), c.runs_per_state);
    EXPECT_LE(o.converged_runs, c.runs_per_state);
    EXPECT_GE(o.ratio, 0.0);
    if (o.cvf_interval == 0) {
      EXPECT_EQ(o.runs, o.baseline_runs);
      EXPECT_EQ(o.convergence_steps, o.baseline_steps);
      EXPECT_EQ(o.ratio, 1.0);
    }
  }
}

TEST(Campaign, DeterministicAndWorkerIndependent) {
  const auto p = matching_program(CommGraph::ring(6));
  SimConfig c;
  c.cvf_intervals = {1, 8};
  c.num_initial_states = 8;
  const auto a = run_campaign(p, c);
  c.workers = 4;
  const auto b = run_campaign(p, c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].initial_state, b[i].initial_state);
    EXPECT_EQ(a[i].runs, b[i].runs);
    EXPECT_EQ(a[i].ratio, b[i].ratio);
  }
}

TEST(Campaign, ExplicitInitialStates) {
  const auto p = coloring_program(CommGraph::ring(4));
  SimConfig c;
  c.cvf_intervals = {0};
  c.initial_states = {{0, 0, 0, 0}, {1, 1, 2, 2}};
  const auto out = run_campaign(p, c);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].initial_state, c.initial_states[0]);
  EXPECT_EQ(out[0].initial_state_index, "0");
  EXPECT_EQ(out[1].initial_state_index, std::to_string(p.index_of({1, 1, 2, 2})));
}

TEST(Campaign, BaselineConvergesForEveryCaseStudy) {
  const std::vector<StabilizingProgram> programs{
      token_ring_program(9), coloring_program(CommGraph::ring(9)),
      matching_program(CommGraph::ring(9))};
  for (const auto& p : programs) {
    SimConfig c;
    c.cvf_intervals = {0};
    c.num_initial_states = 20;
    c.workers = 4;
    for (const auto& o : run_campaign(p, c)) {
      EXPECT_EQ(o.baseline_converged_runs, c.runs_per_state) << p.name();
    }
  }
}

double mean_ratio(const std::vector<SimOutcome>& out, std::uint64_t k) {
  double sum = 0;
  int count = 0;
  for (const auto& o : out) {
    if (o.cvf_interval != k) continue;
    sum += o.ratio;
    ++count;
  }
  return sum / count;
}

// Without cvfs only program steps run, and a coloring step never returns to
// an earlier state, so no run can exceed the longest path.
TEST(RunOne, ColoringBaselineBoundedByMaxRank) {
  const auto p = coloring_program(CommGraph::ring(5));
  const auto space = enumerate(p);
  const auto mr = compute_max_rank(space);
  for (StateIndex s = 0; s < space.state_count(); ++s) {
    const auto r = run_one(p, p.state_at(s), 0, 10000, s + 7);
    ASSERT_TRUE(r.converged);
    ASSERT_LE(static_cast<double>(r.steps), mr.rank(s));
  }
}

// More frequent cvfs slow convergence down.
TEST(Campaign, RatioFallsAsIntervalGrows) {
  const auto p = token_ring_program(9);
  SimConfig c;
  c.cvf_intervals = {1, 2, 4, 8, 16};
  c.num_initial_states = 20;
  c.workers = 4;
  const auto out = run_campaign(p, c);
  for (std::size_t i = 1; i < c.cvf_intervals.size(); ++i) {
    EXPECT_GE(mean_ratio(out, c.cvf_intervals[i - 1]),
              mean_ratio(out, c.cvf_intervals[i]))
        << "intervals " << c.cvf_intervals[i - 1] << " and "
        << c.cvf_intervals[i];
  }
}

}  // namespace
}  // namespace cvflab
