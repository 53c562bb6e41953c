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

#ifndef CVFLAB_SIMULATION_HPP_
#define CVFLAB_SIMULATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cvflab/program_model.hpp"

namespace cvflab {

struct SimConfig {
  // Mean program steps between injected cvfs; 0 disables injection.
  std::vector<std::uint64_t> cvf_intervals{8};
  std::uint64_t runs_per_state = 5;
  std::uint64_t step_threshold = 10000;
  // Explicit initial states; when empty, num_initial_states states outside
  // the invariant are drawn uniformly.
  std::vector<ProgramState> initial_states;
  std::uint64_t num_initial_states = 50;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

void validate(const SimConfig& config);

struct RunResult {
  std::uint64_t steps = 0;
  bool converged = false;

  bool operator==(const RunResult&) const = default;
};

/**
 * One computation from s0. Each iteration fires a uniformly random enabled
 * (process, action, binding); afterwards, with probability 1/cvf_interval,
 * a uniformly random process takes a uniformly random feasible perturbation
 * (the process is redrawn up to n times while its set is empty). Only
 * program steps count as iterations. Stops converged on reaching the
 * invariant, or not converged after `threshold` iterations.
 */
RunResult run_one(const StabilizingProgram& program, const ProgramState& s0,
                  std::uint64_t cvf_interval, std::uint64_t threshold,
                  std::uint64_t seed);

struct SimOutcome {
  ProgramState initial_state;
  std::string initial_state_index;  // decimal; may exceed 64 bits
  std::uint64_t cvf_interval = 0;
  double baseline_steps = 0.0;
  double convergence_steps = 0.0;
  std::uint64_t converged_runs = 0;
  std::uint64_t baseline_converged_runs = 0;
  double ratio = 1.0;  // convergence / baseline, 1 when the baseline is 0
  std::vector<RunResult> baseline_runs;
  std::vector<RunResult> runs;
};

// Initial states drawn for a campaign (outside the invariant, uniform).
std::vector<ProgramState> sample_initial_states(
    const StabilizingProgram& program, std::uint64_t count,
    std::uint64_t seed);

/**
 * For each initial state and each configured interval, runs_per_state runs
 * with cvfs and the matching baseline (interval 0). Run r of state i uses
 * the same seed for every interval, so interval 0 reproduces the baseline.
 * Outcomes are ordered by initial state, then by interval as configured.
 */
std::vector<SimOutcome> run_campaign(const StabilizingProgram& program,
                                     const SimConfig& config);

}  // namespace cvflab

#endif  // CVFLAB_SIMULATION_HPP_
