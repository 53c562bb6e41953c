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

#ifndef CVFLAB_STATE_SPACE_HPP_
#define CVFLAB_STATE_SPACE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cvflab/program_model.hpp"
#include "cvflab/stats.hpp"

namespace cvflab {

inline constexpr std::uint64_t kDefaultMemoryBudget = 8ULL << 30;

struct SpaceOptions {
  std::uint64_t memory_budget = kDefaultMemoryBudget;
  unsigned workers = 1;
};

// Rough resident size of a fully enumerated and ranked state space, or
// UINT64_MAX when |S_p| itself overflows.
std::uint64_t estimate_memory(const StabilizingProgram& program);

/**
 * The explicit program-transition graph over S_p.
 *
 * Every state has at least one outgoing transition: the program's distinct
 * successors, or the sentinel self-loop when nothing is enabled. Reverse
 * adjacency lists only the distinct non-self-loop edges.
 */
class StateSpace {
 public:
  const StabilizingProgram& program() const { return program_; }
  StateIndex state_count() const { return invariant_.size(); }
  std::uint64_t transition_count() const { return targets_.size(); }
  std::uint64_t invariant_count() const { return invariant_count_; }

  bool in_invariant(StateIndex s) const { return invariant_[s]; }
  ProgramState state(StateIndex s) const { return program_.state_at(s); }

  std::span<const StateIndex> targets(StateIndex s) const {
    return {targets_.data() + offsets_[s], targets_.data() + offsets_[s + 1]};
  }
  std::span<const ProcessId> processes(StateIndex s) const {
    return {processes_.data() + offsets_[s],
            processes_.data() + offsets_[s + 1]};
  }
  std::span<const StateIndex> predecessors(StateIndex s) const {
    return {reverse_.data() + reverse_offsets_[s],
            reverse_.data() + reverse_offsets_[s + 1]};
  }

 private:
  friend StateSpace enumerate(const StabilizingProgram&, const SpaceOptions&);

  explicit StateSpace(const StabilizingProgram& program) : program_(program) {}

  StabilizingProgram program_;
  std::vector<bool> invariant_;
  std::uint64_t invariant_count_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<StateIndex> targets_;
  std::vector<ProcessId> processes_;
  std::vector<std::uint64_t> reverse_offsets_;
  std::vector<StateIndex> reverse_;
};

// Throws a resource error naming |S_p| when the estimate exceeds the budget.
StateSpace enumerate(const StabilizingProgram& program,
                     const SpaceOptions& options = {});

enum class RankKind { kMax, kAverage };

const char* to_string(RankKind kind);

/**
 * Per-state ranks. Max-rank is the longest path to the invariant;
 * average-rank is totalPathLength / pathCount over all such paths, kept as
 * exact big integers.
 */
class RankTable {
 public:
  RankKind kind() const { return kind_; }
  StateIndex state_count() const { return values_.size(); }

  double rank(StateIndex s) const { return values_[s]; }
  Rational exact_rank(StateIndex s) const;
  std::span<const double> values() const { return values_; }

  // Average-rank only.
  const BigInt& path_count(StateIndex s) const { return path_count_.at(s); }
  const BigInt& total_path_length(StateIndex s) const {
    return total_length_.at(s);
  }

 private:
  friend RankTable compute_max_rank(const StateSpace&, unsigned);
  friend RankTable compute_average_rank(const StateSpace&, unsigned);

  RankKind kind_ = RankKind::kMax;
  std::vector<double> values_;
  std::vector<std::uint32_t> max_rank_;
  std::vector<BigInt> path_count_;
  std::vector<BigInt> total_length_;
};

// Both throw a stabilization-violation error, naming a state, if some state
// outside the invariant cannot be ranked (cycle or dead end).
RankTable compute_max_rank(const StateSpace& space, unsigned workers = 1);
RankTable compute_average_rank(const StateSpace& space, unsigned workers = 1);
RankTable compute_ranks(const StateSpace& space, RankKind kind,
                        unsigned workers = 1);

// rank(s1) - rank(s0).
Rational rank_effect(const RankTable& table, StateIndex s0, StateIndex s1);

/**
 * Binary rank dump: "CVFR", u32 version (1), u32 kind (0 max, 1 average),
 * u64 state count, then one f64 per state. All little-endian.
 */
struct RankDump {
  RankKind kind = RankKind::kMax;
  std::vector<double> ranks;
};

void write_rank_dump(const RankTable& table, const std::filesystem::path& path);
RankDump read_rank_dump(const std::filesystem::path& path);

}  // namespace cvflab

#endif  // CVFLAB_STATE_SPACE_HPP_
