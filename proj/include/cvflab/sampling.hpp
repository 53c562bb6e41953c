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

#ifndef CVFLAB_SAMPLING_HPP_
#define CVFLAB_SAMPLING_HPP_

#include <cstdint>

#include "cvflab/cvf_analysis.hpp"
#include "cvflab/program_model.hpp"

namespace cvflab {

struct SamplingConfig {
  std::uint64_t num_states = 1000;
  std::uint64_t paths_per_state = 100;
  std::uint64_t walk_cap = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// Throws a usage error unless every count is positive.
void validate(const SamplingConfig& config);

/**
 * Rank estimate of one state from random walks to the invariant. Truncated
 * walks (those hitting walk_cap) are left out of both estimates.
 */
struct SampledRank {
  ProgramState state;
  std::uint64_t max_est = 0;
  double avg_est = 0.0;
  std::uint64_t probes = 0;
  std::uint64_t truncated = 0;
};

// Each walk step fires a uniformly random enabled (process, action, binding).
// A firing that leaves the state unchanged uses up walk budget but does not
// lengthen the path, matching the self-loop-free paths behind exact ranks.
// The walks are seeded from (config.seed, s0) only. Throws an
// unreachable-invariant error when every walk is truncated.
SampledRank probe_rank(const StabilizingProgram& program,
                       const ProgramState& s0, const SamplingConfig& config);

struct PartialAnalysis {
  EffectTally max_rank;
  EffectTally average_rank;

  // Report and histograms for one rank kind; throws like EffectTally::report.
  FullAnalysis result(RankKind kind) const;
};

/**
 * Samples num_states origins uniformly from S_p; every origin outside the
 * invariant contributes its program transitions and cvfs, with both
 * endpoint ranks estimated by one probe batch per distinct state.
 */
PartialAnalysis partial_analysis(const StabilizingProgram& program,
                                 const SamplingConfig& config,
                                 CvfKind cvf_kind = CvfKind::kFeasible);

AnalysisReport partial_report(const StabilizingProgram& program,
                              const SamplingConfig& config, CvfKind cvf_kind,
                              RankKind rank_kind);

}  // namespace cvflab

#endif  // CVFLAB_SAMPLING_HPP_
