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

#include "cvflab/sampling.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cvflab/error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace cvflab {

namespace {

constexpr std::uint64_t kOriginStream = 0x6f726967696e;  // "origin"
constexpr std::uint64_t kProbeStream = 0x70726f6265;     // "probe"

std::uint64_t state_hash(const ProgramState& s) {
  std::uint64_t h = s.size();
  for (LocalValue v : s) h = detail::splitmix64(h ^ v);
  return h;
}

std::string describe(const ProgramState& s) {
  std::string out = "<";
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(s[j]);
  }
  return out + ">";
}

// Distinct program successors other than s itself.
std::vector<ProgramState> step_targets(const StabilizingProgram& program,
                                       const ProgramState& s) {
  std::vector<ProgramState> out;
  for (auto& succ : successors(program, s)) {
    if (succ.state == s) continue;
    if (!out.empty() && out.back() == succ.state) continue;
    out.push_back(std::move(succ.state));
  }
  return out;
}

}  // namespace

void validate(const SamplingConfig& config) {
  if (config.num_states == 0 || config.paths_per_state == 0 ||
      config.walk_cap == 0) {
    fail(ErrorKind::kUsage,
         "num_states, paths_per_state and walk_cap must all be positive");
  }
}

SampledRank probe_rank(const StabilizingProgram& program,
                       const ProgramState& s0, const SamplingConfig& config) {
  validate(config);
  program.require_valid(s0);
  SampledRank out;
  out.state = s0;
  out.probes = config.paths_per_state;
  if (in_invariant(program, s0)) return out;

  const std::uint64_t h = state_hash(s0);
  std::vector<Move> moves;
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k < config.paths_per_state; ++k) {
    detail::Rng rng(detail::derive_seed(config.seed, {kProbeStream, h, k}));
    ProgramState x = s0;
    std::uint64_t length = 0;
    std::uint64_t steps = 0;
    bool reached = true;
    while (!in_invariant(program, x)) {
      if (steps == config.walk_cap) {
        reached = false;
        break;
      }
      ++steps;
      enabled_moves(program, x, moves);
      if (moves.empty()) {
        reached = false;  // deadlock outside inv; cannot make progress
        break;
      }
      const Move& m = moves[detail::uniform_below(rng, moves.size())];
      ProgramState next = apply_move(program, x, m);
      if (next != x) {
        ++length;
        x = std::move(next);
      }
    }
    if (!reached) {
      ++out.truncated;
      continue;
    }
    out.max_est = std::max(out.max_est, length);
    total += length;
  }
  const std::uint64_t used = out.probes - out.truncated;
  if (used == 0) {
    fail(ErrorKind::kUnreachable,
         "all " + std::to_string(out.probes) + " probes from state " +
             describe(s0) + " hit the walk cap of " +
             std::to_string(config.walk_cap) + " before reaching the invariant");
  }
  out.avg_est = static_cast<double>(total) / static_cast<double>(used);
  return out;
}

PartialAnalysis partial_analysis(const StabilizingProgram& program,
                                 const SamplingConfig& config,
                                 CvfKind cvf_kind) {
  validate(config);
  const std::size_t n = program.process_count();

  struct Origin {
    std::size_t self;
    bool legit;
    std::vector<std::size_t> steps;
    std::vector<std::size_t> cvfs;
  };
  std::vector<ProgramState> endpoints;
  std::map<ProgramState, std::size_t> slot;
  auto intern = [&](ProgramState s) {
    auto [it, inserted] = slot.try_emplace(s, endpoints.size());
    if (inserted) endpoints.push_back(std::move(s));
    return it->second;
  };

  detail::Rng rng(detail::derive_seed(config.seed, {kOriginStream}));
  std::vector<Origin> origins;
  origins.reserve(config.num_states);
  for (std::uint64_t i = 0; i < config.num_states; ++i) {
    ProgramState s(n);
    for (ProcessId j = 0; j < n; ++j) {
      s[j] = static_cast<LocalValue>(
          detail::uniform_below(rng, program.domain_size(j)));
    }
    Origin o{intern(s), in_invariant(program, s), {}, {}};
    if (!o.legit) {
      for (auto& t : step_targets(program, s)) o.steps.push_back(intern(t));
      for (auto& [j, t] : cvf_targets(program, cvf_kind, s)) {
        o.cvfs.push_back(intern(std::move(t)));
      }
    }
    origins.push_back(std::move(o));
  }

  std::vector<SampledRank> ranks(endpoints.size());
  detail::for_each_chunk(
      endpoints.size(), config.workers,
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        for (auto i = begin; i < end; ++i) {
          ranks[i] = probe_rank(program, endpoints[i], config);
        }
      },
      /*chunk_size=*/64);

  EffectTally by_max;
  EffectTally by_avg;
  for (const auto& o : origins) {
    if (o.legit) continue;
    const auto& r0 = ranks[o.self];
    auto max_of = [&](std::size_t i) {
      return static_cast<double>(ranks[i].max_est);
    };
    for (std::size_t t : o.steps) {
      by_max.add_program(effect_sample(max_of(o.self), max_of(t)));
      by_avg.add_program(effect_sample(r0.avg_est, ranks[t].avg_est));
    }
    for (std::size_t t : o.cvfs) {
      by_max.add_cvf(effect_sample(max_of(o.self), max_of(t)));
      by_avg.add_cvf(effect_sample(r0.avg_est, ranks[t].avg_est));
    }
  }

  return {std::move(by_max), std::move(by_avg)};
}

FullAnalysis PartialAnalysis::result(RankKind kind) const {
  const EffectTally& tally = kind == RankKind::kMax ? max_rank : average_rank;
  return {tally.report(kind, AnalysisKind::kPartial),
          tally.program_histogram(kind), tally.cvf_histogram(kind)};
}

AnalysisReport partial_report(const StabilizingProgram& program,
                              const SamplingConfig& config, CvfKind cvf_kind,
                              RankKind rank_kind) {
  return partial_analysis(program, config, cvf_kind)
      .result(rank_kind)
      .report;
}

}  // namespace cvflab
