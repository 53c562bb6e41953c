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

#ifndef CVFLAB_PROGRAM_MODEL_HPP_
#define CVFLAB_PROGRAM_MODEL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvflab {

using ProcessId = std::uint32_t;
using LocalValue = std::uint16_t;
using StateIndex = std::uint64_t;
using Edge = std::pair<ProcessId, ProcessId>;

/**
 * Undirected communication graph over processes 0..n-1.
 *
 * Adjacency lists are kept sorted; construction rejects asymmetric or
 * reflexive adjacency and out-of-range ids with a usage error.
 */
class CommGraph {
 public:
  CommGraph() = default;
  explicit CommGraph(std::vector<std::vector<ProcessId>> adjacency);

  static CommGraph from_edges(std::size_t node_count,
                              std::span<const Edge> edges);
  static CommGraph ring(std::size_t node_count);

  std::size_t node_count() const { return adjacency_.size(); }
  std::span<const ProcessId> neighbors(ProcessId j) const {
    return adjacency_.at(j);
  }
  std::size_t degree(ProcessId j) const { return adjacency_.at(j).size(); }
  std::size_t max_degree() const;
  std::size_t min_degree() const;
  std::size_t edge_count() const;

  // Ascending (u, v) pairs with u < v.
  std::vector<Edge> edges() const;
  bool connected() const;
  bool adjacent(ProcessId a, ProcessId b) const;

  bool operator==(const CommGraph&) const = default;

 private:
  std::vector<std::vector<ProcessId>> adjacency_;
};

// values[j] is process j's local assignment, encoded as an index into its
// finite domain (layout is program specific).
using ProgramState = std::vector<LocalValue>;

inline constexpr int kNoBinding = -1;

/**
 * A guarded action `g -> st` of one process.
 *
 * `bindings` enumerates the values of an existentially bound variable in the
 * guard (e.g. "exists i in Nb.j: p.i == j"); leave it empty for unbound
 * actions, which then run with kNoBinding. Guards and statements may read
 * only j and Nb.j; statements return the new local value of j, or nullopt
 * when the statement is undefined for the given reads.
 */
struct Action {
  std::string name;
  std::function<bool(const ProgramState&, ProcessId)> guard;
  std::function<std::vector<int>(const ProgramState&, ProcessId)> bindings;
  std::function<std::optional<LocalValue>(const ProgramState&, ProcessId, int)>
      statement;
};

enum class InvariantKind { kSilent, kSingleToken };

// One schedulable unit: process, action index at that process, binding.
struct Move {
  ProcessId process = 0;
  std::uint32_t action = 0;
  int binding = kNoBinding;

  bool operator==(const Move&) const = default;
};

struct Successor {
  ProcessId process = 0;  // == process_count() for the deadlock self-loop
  ProgramState state;

  bool operator==(const Successor&) const = default;
};

// Closed-form feasible-perturbation targets of process j holding `current`.
// Must agree with enumerate_perturbation_targets.
using PerturbationRule =
    std::function<std::vector<LocalValue>(ProcessId, LocalValue)>;

class StabilizingProgram {
 public:
  StabilizingProgram(std::string name, CommGraph graph,
                     std::vector<LocalValue> domain_sizes,
                     std::vector<std::vector<Action>> actions,
                     InvariantKind invariant_kind,
                     PerturbationRule perturbation_rule = {});

  const std::string& name() const { return name_; }
  const CommGraph& graph() const { return graph_; }
  std::size_t process_count() const { return domain_sizes_.size(); }
  ProcessId sentinel_process() const {
    return static_cast<ProcessId>(process_count());
  }
  LocalValue domain_size(ProcessId j) const { return domain_sizes_.at(j); }
  std::span<const Action> actions(ProcessId j) const { return actions_.at(j); }
  InvariantKind invariant_kind() const { return invariant_kind_; }

  // |S_p|, or nullopt when it does not fit in 64 bits.
  std::optional<StateIndex> state_count() const { return state_count_; }
  // Decimal |S_p|, exact even when it exceeds 64 bits.
  std::string state_count_string() const;

  // Mixed-radix index; process 0 is the most significant digit, so index
  // order equals lexicographic order of states.
  StateIndex index_of(const ProgramState& s) const;
  ProgramState state_at(StateIndex index) const;
  std::string index_string(const ProgramState& s) const;
  StateIndex weight(ProcessId j) const { return weights_.at(j); }

  bool valid(const ProgramState& s) const;
  void require_valid(const ProgramState& s) const;

  // Sorted, duplicate free targets (excluding `current`).
  std::span<const LocalValue> perturbation_targets(ProcessId j,
                                                   LocalValue current) const {
    return perturbation_table_.at(j).at(current);
  }

 private:
  std::string name_;
  CommGraph graph_;
  std::vector<LocalValue> domain_sizes_;
  std::vector<std::vector<Action>> actions_;
  InvariantKind invariant_kind_;
  std::optional<StateIndex> state_count_;
  std::vector<StateIndex> weights_;
  std::vector<std::vector<std::vector<LocalValue>>> perturbation_table_;
};

// Action ids at j whose guards hold in s.
std::vector<std::uint32_t> enabled_actions(const StabilizingProgram& program,
                                           const ProgramState& s, ProcessId j);

// Every enabled (process, action, binding) triple, in process/action/binding
// order.
std::vector<Move> enabled_moves(const StabilizingProgram& program,
                                const ProgramState& s);
void enabled_moves(const StabilizingProgram& program, const ProgramState& s,
                   std::vector<Move>& out);

bool any_enabled(const StabilizingProgram& program, const ProgramState& s,
                 ProcessId j);

// Fires an enabled action; with kNoBinding a bound action uses its smallest
// binding. Throws a contract error when the action is not enabled.
ProgramState apply_action(const StabilizingProgram& program,
                          const ProgramState& s, ProcessId j,
                          std::uint32_t action, int binding = kNoBinding);
ProgramState apply_move(const StabilizingProgram& program,
                        const ProgramState& s, const Move& move);

// Program transitions out of s, sorted by (state, process), duplicates
// removed. A state with no enabled action gets the single self-loop with the
// sentinel process id.
std::vector<Successor> successors(const StabilizingProgram& program,
                                  const ProgramState& s);

bool in_invariant(const StabilizingProgram& program, const ProgramState& s);

std::vector<ProgramState> feasible_perturbations(
    const StabilizingProgram& program, const ProgramState& s, ProcessId j);

// Brute-force route: run every statement of j with every combination of
// neighbor reads (local reads fixed at `current`), ignoring guards.
std::vector<LocalValue> enumerate_perturbation_targets(
    const StabilizingProgram& program, ProcessId j, LocalValue current);

}  // namespace cvflab

#endif  // CVFLAB_PROGRAM_MODEL_HPP_
