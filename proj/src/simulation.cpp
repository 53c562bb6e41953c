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

#include "cvflab/simulation.hpp"

#include <string>

#include "cvflab/error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace cvflab {

namespace {

constexpr std::uint64_t kInitialStream = 0x696e6974;  // "init"
constexpr std::uint64_t kRunStream = 0x72756e;        // "run"

double mean_steps(const std::vector<RunResult>& runs) {
  if (runs.empty()) return 0.0;
  std::uint64_t total = 0;
  for (const auto& r : runs) total += r.steps;
  return static_cast<double>(total) / static_cast<double>(runs.size());
}

std::uint64_t converged_count(const std::vector<RunResult>& runs) {
  std::uint64_t c = 0;
  for (const auto& r : runs) c += r.converged;
  return c;
}

}  // namespace

void validate(const SimConfig& config) {
  if (config.runs_per_state == 0) {
    fail(ErrorKind::kUsage, "runs_per_state must be positive");
  }
  if (config.step_threshold == 0) {
    fail(ErrorKind::kUsage, "step threshold must be positive");
  }
  if (config.cvf_intervals.empty()) {
    fail(ErrorKind::kUsage, "at least one cvf interval is required");
  }
  if (config.initial_states.empty() && config.num_initial_states == 0) {
    fail(ErrorKind::kUsage, "no initial states requested");
  }
}

RunResult run_one(const StabilizingProgram& program, const ProgramState& s0,
                  std::uint64_t cvf_interval, std::uint64_t threshold,
                  std::uint64_t seed) {
  program.require_valid(s0);
  const auto n = program.process_count();
  detail::Rng rng(seed);
  ProgramState x = s0;
  std::vector<Move> moves;
  RunResult result;
  while (true) {
    if (in_invariant(program, x)) {
      result.converged = true;
      return result;
    }
    if (result.steps >= threshold) return result;
    enabled_moves(program, x, moves);
    if (moves.empty()) {
      // Deadlocked outside the invariant: it can never converge.
      result.steps = threshold;
      return result;
    }
    x = apply_move(program, x, moves[detail::uniform_below(rng, moves.size())]);
    ++result.steps;

    if (cvf_interval == 0 ||
        detail::uniform_unit(rng) >= 1.0 / static_cast<double>(cvf_interval)) {
      continue;
    }
    for (std::size_t attempt = 0; attempt < n; ++attempt) {
      const auto q = static_cast<ProcessId>(detail::uniform_below(rng, n));
      const auto targets = program.perturbation_targets(q, x[q]);
      if (targets.empty()) continue;
      x[q] = targets[detail::uniform_below(rng, targets.size())];
      break;
    }
  }
}

std::vector<ProgramState> sample_initial_states(
    const StabilizingProgram& program, std::uint64_t count,
    std::uint64_t seed) {
  const auto n = program.process_count();
  detail::Rng rng(detail::derive_seed(seed, {kInitialStream}));
  std::vector<ProgramState> out;
  // Generous bound on rejections so a program whose states are (nearly) all
  // legitimate fails instead of spinning.
  const std::uint64_t budget = 1000 * count + 1000;
  ProgramState s(n);
  for (std::uint64_t tries = 0; out.size() < count; ++tries) {
    if (tries == budget) {
      fail(ErrorKind::kEmpty,
           "could not draw " + std::to_string(count) +
               " initial states outside the invariant");
    }
    for (ProcessId j = 0; j < n; ++j) {
      s[j] = static_cast<LocalValue>(
          detail::uniform_below(rng, program.domain_size(j)));
    }
    if (!in_invariant(program, s)) out.push_back(s);
  }
  return out;
}

std::vector<SimOutcome> run_campaign(const StabilizingProgram& program,
                                     const SimConfig& config) {
  validate(config);
  const auto initial =
      config.initial_states.empty()
          ? sample_initial_states(program, config.num_initial_states,
                                  config.seed)
          : config.initial_states;
  for (const auto& s : initial) program.require_valid(s);

  const auto intervals = config.cvf_intervals.size();
  std::vector<SimOutcome> outcomes(initial.size() * intervals);
  detail::for_each_chunk(
      initial.size(), config.workers,
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        for (auto i = begin; i < end; ++i) {
          const auto& s0 = initial[i];
          auto run = [&](std::uint64_t interval, std::uint64_t r) {
            return run_one(program, s0, interval, config.step_threshold,
                           detail::derive_seed(config.seed, {kRunStream, i, r}));
          };
          std::vector<RunResult> baseline;
          for (std::uint64_t r = 0; r < config.runs_per_state; ++r) {
            baseline.push_back(run(0, r));
          }
          for (std::size_t k = 0; k < intervals; ++k) {
            SimOutcome& o = outcomes[i * intervals + k];
            o.initial_state = s0;
            o.initial_state_index = program.index_string(s0);
            o.cvf_interval = config.cvf_intervals[k];
            o.baseline_runs = baseline;
            for (std::uint64_t r = 0; r < config.runs_per_state; ++r) {
              o.runs.push_back(o.cvf_interval == 0 ? baseline[r]
                                                   : run(o.cvf_interval, r));
            }
            o.baseline_steps = mean_steps(o.baseline_runs);
            o.convergence_steps = mean_steps(o.runs);
            o.baseline_converged_runs = converged_count(o.baseline_runs);
            o.converged_runs = converged_count(o.runs);
            o.ratio = o.baseline_steps == 0.0
                          ? 1.0
                          : o.convergence_steps / o.baseline_steps;
          }
        }
      },
      /*chunk_size=*/1);
  return outcomes;
}

}  // namespace cvflab
