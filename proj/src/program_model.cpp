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

#include "cvflab/program_model.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include <boost/multiprecision/cpp_int.hpp>

#include "cvflab/error.hpp"

namespace cvflab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kContract: return "contract violation";
    case ErrorKind::kResource: return "resource error";
    case ErrorKind::kStabilization: return "stabilization violation";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kDegenerate: return "degenerate report";
    case ErrorKind::kFit: return "fit error";
    case ErrorKind::kGeneration: return "generation error";
    case ErrorKind::kEmpty: return "empty input";
    case ErrorKind::kUnreachable: return "unreachable invariant";
  }
  return "error";
}

// --- CommGraph -------------------------------------------------------------

CommGraph::CommGraph(std::vector<std::vector<ProcessId>> adjacency)
    : adjacency_(std::move(adjacency)) {
  const auto n = adjacency_.size();
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
  for (ProcessId j = 0; j < n; ++j) {
    const auto& nb = adjacency_[j];
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      fail(ErrorKind::kUsage,
           "duplicate neighbor in adjacency of process " + std::to_string(j));
    }
    for (ProcessId k : nb) {
      if (k >= n) {
        fail(ErrorKind::kUsage, "neighbor id " + std::to_string(k) +
                                    " out of range for " + std::to_string(n) +
                                    " processes");
      }
      if (k == j) {
        fail(ErrorKind::kUsage,
             "process " + std::to_string(j) + " lists itself as a neighbor");
      }
      const auto& back = adjacency_[k];
      if (!std::binary_search(back.begin(), back.end(), j)) {
        fail(ErrorKind::kUsage, "asymmetric adjacency between " +
                                    std::to_string(j) + " and " +
                                    std::to_string(k));
      }
    }
  }
}

CommGraph CommGraph::from_edges(std::size_t node_count,
                                std::span<const Edge> edges) {
  std::vector<std::vector<ProcessId>> adjacency(node_count);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      fail(ErrorKind::kUsage, "edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ") out of range");
    }
    if (u == v) {
      fail(ErrorKind::kUsage, "self-loop at node " + std::to_string(u));
    }
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  return CommGraph(std::move(adjacency));
}

CommGraph CommGraph::ring(std::size_t node_count) {
  if (node_count < 3) fail(ErrorKind::kUsage, "ring needs at least 3 nodes");
  std::vector<std::vector<ProcessId>> adjacency(node_count);
  for (std::size_t j = 0; j < node_count; ++j) {
    adjacency[j] = {static_cast<ProcessId>((j + node_count - 1) % node_count),
                    static_cast<ProcessId>((j + 1) % node_count)};
  }
  return CommGraph(std::move(adjacency));
}

std::size_t CommGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& nb : adjacency_) d = std::max(d, nb.size());
  return d;
}

std::size_t CommGraph::min_degree() const {
  if (adjacency_.empty()) return 0;
  std::size_t d = std::numeric_limits<std::size_t>::max();
  for (const auto& nb : adjacency_) d = std::min(d, nb.size());
  return d;
}

std::size_t CommGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adjacency_) twice += nb.size();
  return twice / 2;
}

std::vector<Edge> CommGraph::edges() const {
  std::vector<Edge> out;
  for (ProcessId u = 0; u < adjacency_.size(); ++u) {
    for (ProcessId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool CommGraph::connected() const {
  if (adjacency_.empty()) return true;
  std::vector<bool> seen(adjacency_.size(), false);
  std::queue<ProcessId> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const ProcessId u = frontier.front();
    frontier.pop();
    for (ProcessId v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == adjacency_.size();
}

bool CommGraph::adjacent(ProcessId a, ProcessId b) const {
  const auto& nb = adjacency_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

// --- StabilizingProgram ------------------------------------------------------

StabilizingProgram::StabilizingProgram(std::string name, CommGraph graph,
                                       std::vector<LocalValue> domain_sizes,
                                       std::vector<std::vector<Action>> actions,
                                       InvariantKind invariant_kind,
                                       PerturbationRule perturbation_rule)
    : name_(std::move(name)),
      graph_(std::move(graph)),
      domain_sizes_(std::move(domain_sizes)),
      actions_(std::move(actions)),
      invariant_kind_(invariant_kind) {
  const auto n = domain_sizes_.size();
  if (n == 0) fail(ErrorKind::kUsage, "program has no processes");
  if (graph_.node_count() != n || actions_.size() != n) {
    fail(ErrorKind::kUsage, "graph, domains and actions disagree on n");
  }
  for (auto d : domain_sizes_) {
    if (d == 0) fail(ErrorKind::kUsage, "empty variable domain");
  }

  weights_.assign(n, 0);
  boost::multiprecision::cpp_int total = 1;
  bool fits = true;
  StateIndex w = 1;
  for (std::size_t j = n; j-- > 0;) {
    weights_[j] = fits ? w : 0;
    total *= domain_sizes_[j];
    if (fits) {
      if (w > std::numeric_limits<StateIndex>::max() / domain_sizes_[j]) {
        fits = false;
      } else {
        w *= domain_sizes_[j];
      }
    }
  }
  if (fits) state_count_ = w;

  perturbation_table_.resize(n);
  for (ProcessId j = 0; j < n; ++j) {
    perturbation_table_[j].resize(domain_sizes_[j]);
    for (LocalValue v = 0; v < domain_sizes_[j]; ++v) {
      auto targets = perturbation_rule
                         ? perturbation_rule(j, v)
                         : enumerate_perturbation_targets(*this, j, v);
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      std::erase(targets, v);
      perturbation_table_[j][v] = std::move(targets);
    }
  }
}

std::string StabilizingProgram::state_count_string() const {
  boost::multiprecision::cpp_int total = 1;
  for (auto d : domain_sizes_) total *= d;
  return total.str();
}

StateIndex StabilizingProgram::index_of(const ProgramState& s) const {
  if (!state_count_) {
    fail(ErrorKind::kResource,
         "state space of " + state_count_string() + " states is not indexable");
  }
  StateIndex index = 0;
  for (std::size_t j = 0; j < s.size(); ++j) index += s[j] * weights_[j];
  return index;
}

ProgramState StabilizingProgram::state_at(StateIndex index) const {
  if (!state_count_ || index >= *state_count_) {
    fail(ErrorKind::kUsage, "state index " + std::to_string(index) +
                                " out of range");
  }
  ProgramState s(process_count());
  for (std::size_t j = 0; j < s.size(); ++j) {
    s[j] = static_cast<LocalValue>(index / weights_[j]);
    index %= weights_[j];
  }
  return s;
}

std::string StabilizingProgram::index_string(const ProgramState& s) const {
  boost::multiprecision::cpp_int index = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    index = index * domain_sizes_[j] + s[j];
  }
  return index.str();
}

bool StabilizingProgram::valid(const ProgramState& s) const {
  if (s.size() != process_count()) return false;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] >= domain_sizes_[j]) return false;
  }
  return true;
}

void StabilizingProgram::require_valid(const ProgramState& s) const {
  if (!valid(s)) fail(ErrorKind::kUsage, "state is not valid for " + name_);
}

// --- operations --------------------------------------------------------------

namespace {

void check_process(const StabilizingProgram& program, ProcessId j) {
  if (j >= program.process_count()) {
    fail(ErrorKind::kUsage, "process id " + std::to_string(j) +
                                " out of range for " +
                                std::to_string(program.process_count()) +
                                " processes");
  }
}

std::vector<int> bindings_of(const Action& action, const ProgramState& s,
                             ProcessId j) {
  if (!action.bindings) return {kNoBinding};
  auto b = action.bindings(s, j);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace

std::vector<std::uint32_t> enabled_actions(const StabilizingProgram& program,
                                           const ProgramState& s,
                                           ProcessId j) {
  check_process(program, j);
  std::vector<std::uint32_t> out;
  const auto actions = program.actions(j);
  for (std::uint32_t a = 0; a < actions.size(); ++a) {
    if (actions[a].guard(s, j)) out.push_back(a);
  }
  return out;
}

bool any_enabled(const StabilizingProgram& program, const ProgramState& s,
                 ProcessId j) {
  for (const auto& action : program.actions(j)) {
    if (action.guard(s, j)) return true;
  }
  return false;
}

void enabled_moves(const StabilizingProgram& program, const ProgramState& s,
                   std::vector<Move>& out) {
  out.clear();
  for (ProcessId j = 0; j < program.process_count(); ++j) {
    const auto actions = program.actions(j);
    for (std::uint32_t a = 0; a < actions.size(); ++a) {
      if (!actions[a].guard(s, j)) continue;
      for (int b : bindings_of(actions[a], s, j)) out.push_back({j, a, b});
    }
  }
}

std::vector<Move> enabled_moves(const StabilizingProgram& program,
                                const ProgramState& s) {
  std::vector<Move> out;
  enabled_moves(program, s, out);
  return out;
}

ProgramState apply_move(const StabilizingProgram& program,
                        const ProgramState& s, const Move& move) {
  const auto& action = program.actions(move.process)[move.action];
  auto value = action.statement(s, move.process, move.binding);
  if (!value) {
    fail(ErrorKind::kContract, "statement of '" + action.name +
                                   "' undefined at process " +
                                   std::to_string(move.process));
  }
  ProgramState next = s;
  next[move.process] = *value;
  return next;
}

ProgramState apply_action(const StabilizingProgram& program,
                          const ProgramState& s, ProcessId j,
                          std::uint32_t action, int binding) {
  check_process(program, j);
  const auto actions = program.actions(j);
  if (action >= actions.size() || !actions[action].guard(s, j)) {
    fail(ErrorKind::kContract, "action " + std::to_string(action) +
                                   " is not enabled at process " +
                                   std::to_string(j));
  }
  const auto bindings = bindings_of(actions[action], s, j);
  if (binding == kNoBinding) {
    if (bindings.empty()) {
      fail(ErrorKind::kContract, "action has no satisfying binding");
    }
    binding = bindings.front();
  } else if (!std::binary_search(bindings.begin(), bindings.end(), binding)) {
    fail(ErrorKind::kContract,
         "binding " + std::to_string(binding) + " does not satisfy the guard");
  }
  return apply_move(program, s, Move{j, action, binding});
}

std::vector<Successor> successors(const StabilizingProgram& program,
                                  const ProgramState& s) {
  std::vector<Successor> out;
  for (const Move& m : enabled_moves(program, s)) {
    out.push_back({m.process, apply_move(program, s, m)});
  }
  if (out.empty()) {
    out.push_back({program.sentinel_process(), s});
    return out;
  }
  std::sort(out.begin(), out.end(), [](const Successor& a, const Successor& b) {
    return std::tie(a.state, a.process) < std::tie(b.state, b.process);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_invariant(const StabilizingProgram& program, const ProgramState& s) {
  std::size_t enabled = 0;
  for (ProcessId j = 0; j < program.process_count(); ++j) {
    if (!any_enabled(program, s, j)) continue;
    ++enabled;
    if (program.invariant_kind() == InvariantKind::kSilent || enabled > 1) {
      return false;
    }
  }
  return program.invariant_kind() == InvariantKind::kSilent ? enabled == 0
                                                             : enabled == 1;
}

std::vector<ProgramState> feasible_perturbations(
    const StabilizingProgram& program, const ProgramState& s, ProcessId j) {
  check_process(program, j);
  std::vector<ProgramState> out;
  for (LocalValue v : program.perturbation_targets(j, s[j])) {
    out.push_back(s);
    out.back()[j] = v;
  }
  return out;
}

std::vector<LocalValue> enumerate_perturbation_targets(
    const StabilizingProgram& program, ProcessId j, LocalValue current) {
  check_process(program, j);
  const auto neighbors = program.graph().neighbors(j);
  ProgramState view(program.process_count(), 0);
  view[j] = current;

  std::vector<LocalValue> targets;
  // Odometer over the neighbors' domains.
  while (true) {
    for (const auto& action : program.actions(j)) {
      for (int b : bindings_of(action, view, j)) {
        if (auto v = action.statement(view, j, b); v && *v != current) {
          targets.push_back(*v);
        }
      }
    }
    std::size_t k = 0;
    for (; k < neighbors.size(); ++k) {
      const ProcessId nb = neighbors[k];
      if (++view[nb] < program.domain_size(nb)) break;
      view[nb] = 0;
    }
    if (k == neighbors.size()) break;
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  return targets;
}

}  // namespace cvflab
