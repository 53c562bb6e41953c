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

#include "cvflab/case_studies.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "cvflab/error.hpp"

namespace cvflab {

namespace {

LocalValue inc3(LocalValue v) { return static_cast<LocalValue>((v + 1) % 3); }
LocalValue dec3(LocalValue v) { return static_cast<LocalValue>((v + 2) % 3); }

}  // namespace

StabilizingProgram token_ring_program(std::size_t n) {
  if (n < 3) {
    fail(ErrorKind::kUsage, "token ring needs n >= 3, got " + std::to_string(n));
  }
  const auto last = static_cast<ProcessId>(n - 1);
  std::vector<std::vector<Action>> actions(n);

  actions[0].push_back(Action{
      "decrement",
      [](const ProgramState& s, ProcessId) { return inc3(s[0]) == s[1]; },
      {},
      [](const ProgramState& s, ProcessId, int) -> std::optional<LocalValue> {
        return dec3(s[0]);
      }});

  for (ProcessId j = 1; j < last; ++j) {
    actions[j].push_back(Action{
        "copy-left",
        [](const ProgramState& s, ProcessId j) { return inc3(s[j]) == s[j - 1]; },
        {},
        [](const ProgramState& s, ProcessId j, int) -> std::optional<LocalValue> {
          return s[j - 1];
        }});
    actions[j].push_back(Action{
        "copy-right",
        [](const ProgramState& s, ProcessId j) { return inc3(s[j]) == s[j + 1]; },
        {},
        [](const ProgramState& s, ProcessId j, int) -> std::optional<LocalValue> {
          return s[j + 1];
        }});
  }

  actions[last].push_back(Action{
      "copy-if",
      [](const ProgramState& s, ProcessId j) {
        return s[0] == s[j - 1] && inc3(s[j - 1]) != s[j];
      },
      {},
      [](const ProgramState& s, ProcessId j, int) -> std::optional<LocalValue> {
        return s[j - 1];
      }});

  // Process 0's statement reads nothing from its neighbors, so it has a
  // single target; every other statement copies a neighbor.
  auto rule = [](ProcessId j, LocalValue current) {
    if (j == 0) return std::vector<LocalValue>{dec3(current)};
    return std::vector<LocalValue>{0, 1, 2};
  };

  return StabilizingProgram("token-ring", CommGraph::ring(n),
                            std::vector<LocalValue>(n, 3), std::move(actions),
                            InvariantKind::kSingleToken, rule);
}

StabilizingProgram coloring_program(const CommGraph& graph) {
  const auto n = graph.node_count();
  if (n == 0) fail(ErrorKind::kUsage, "coloring needs a nonempty graph");
  const auto colors = static_cast<LocalValue>(graph.max_degree() + 1);
  auto g = std::make_shared<const CommGraph>(graph);

  std::vector<std::vector<Action>> actions(n);
  for (ProcessId j = 0; j < n; ++j) {
    actions[j].push_back(Action{
        "recolor",
        [g](const ProgramState& s, ProcessId j) {
          const auto nb = g->neighbors(j);
          return std::any_of(nb.begin(), nb.end(),
                             [&](ProcessId k) { return s[k] == s[j]; });
        },
        {},
        [g, colors](const ProgramState& s, ProcessId j,
                    int) -> std::optional<LocalValue> {
          const auto nb = g->neighbors(j);
          LocalValue c = 0;
          while (std::any_of(nb.begin(), nb.end(),
                             [&](ProcessId k) { return s[k] == c; })) {
            ++c;
          }
          if (c >= colors) return std::nullopt;
          return c;
        }});
  }

  // With arbitrary reads the minimum free color can be anything in
  // 0..deg(j).
  auto rule = [g](ProcessId j, LocalValue) {
    std::vector<LocalValue> out(g->degree(j) + 1);
    for (LocalValue c = 0; c < out.size(); ++c) out[c] = c;
    return out;
  };

  return StabilizingProgram("coloring", graph,
                            std::vector<LocalValue>(n, colors),
                            std::move(actions), InvariantKind::kSilent, rule);
}

namespace matching {

LocalValue encode(const CommGraph& graph, ProcessId j,
                  std::optional<ProcessId> partner, bool married) {
  LocalValue slot = 0;
  if (partner) {
    const auto nb = graph.neighbors(j);
    auto it = std::lower_bound(nb.begin(), nb.end(), *partner);
    if (it == nb.end() || *it != *partner) {
      fail(ErrorKind::kUsage, std::to_string(*partner) +
                                  " is not a neighbor of " + std::to_string(j));
    }
    slot = static_cast<LocalValue>(it - nb.begin() + 1);
  }
  return static_cast<LocalValue>(slot * 2 + (married ? 1 : 0));
}

std::optional<ProcessId> partner(const CommGraph& graph, const ProgramState& s,
                                 ProcessId j) {
  const LocalValue slot = s[j] / 2;
  if (slot == 0) return std::nullopt;
  return graph.neighbors(j)[slot - 1];
}

bool married_flag(const ProgramState& s, ProcessId j) { return s[j] % 2 == 1; }

bool pr_married(const CommGraph& graph, const ProgramState& s, ProcessId j) {
  const auto p = partner(graph, s, j);
  return p && partner(graph, s, *p) == j;
}

}  // namespace matching

StabilizingProgram matching_program(const CommGraph& graph) {
  using matching::married_flag;
  using matching::partner;
  using matching::pr_married;

  const auto n = graph.node_count();
  if (n < 2) fail(ErrorKind::kUsage, "matching needs at least 2 processes");
  auto g = std::make_shared<const CommGraph>(graph);

  auto consistent = [g](const ProgramState& s, ProcessId j) {
    return married_flag(s, j) == pr_married(*g, s, j);
  };
  auto with_partner = [g](const ProgramState& s, ProcessId j,
                          std::optional<ProcessId> p) {
    return matching::encode(*g, j, p, married_flag(s, j));
  };
  // Candidates for "propose": free, unproposing neighbors with smaller id.
  auto free_smaller = [g](const ProgramState& s, ProcessId j) {
    std::vector<ProcessId> out;
    for (ProcessId k : g->neighbors(j)) {
      if (k < j && !partner(*g, s, k) && !married_flag(s, k)) out.push_back(k);
    }
    return out;
  };
  auto proposers = [g](const ProgramState& s, ProcessId j) {
    std::vector<int> out;
    for (ProcessId i : g->neighbors(j)) {
      if (partner(*g, s, i) == j) out.push_back(static_cast<int>(i));
    }
    return out;
  };

  std::vector<std::vector<Action>> actions(n);
  std::vector<LocalValue> domains(n);
  for (ProcessId j = 0; j < n; ++j) {
    domains[j] = static_cast<LocalValue>((graph.degree(j) + 1) * 2);

    actions[j].push_back(Action{
        "update-married",
        [consistent](const ProgramState& s, ProcessId j) {
          return !consistent(s, j);
        },
        {},
        [g](const ProgramState& s, ProcessId j,
            int) -> std::optional<LocalValue> {
          return matching::encode(*g, j, partner(*g, s, j),
                                  pr_married(*g, s, j));
        }});

    actions[j].push_back(Action{
        "accept",
        [g, consistent, proposers](const ProgramState& s, ProcessId j) {
          return consistent(s, j) && !partner(*g, s, j) &&
                 !proposers(s, j).empty();
        },
        proposers,
        [with_partner](const ProgramState& s, ProcessId j,
                       int i) -> std::optional<LocalValue> {
          if (i < 0) return std::nullopt;
          return with_partner(s, j, static_cast<ProcessId>(i));
        }});

    actions[j].push_back(Action{
        "propose",
        [g, consistent, proposers, free_smaller](const ProgramState& s,
                                                 ProcessId j) {
          return consistent(s, j) && !partner(*g, s, j) &&
                 proposers(s, j).empty() && !free_smaller(s, j).empty();
        },
        {},
        [with_partner, free_smaller](const ProgramState& s, ProcessId j,
                                     int) -> std::optional<LocalValue> {
          const auto candidates = free_smaller(s, j);
          if (candidates.empty()) return std::nullopt;
          return with_partner(s, j, candidates.back());
        }});

    actions[j].push_back(Action{
        "withdraw",
        [g, consistent](const ProgramState& s, ProcessId j) {
          if (!consistent(s, j)) return false;
          const auto i = partner(*g, s, j);
          return i && partner(*g, s, *i) != j &&
                 (married_flag(s, *i) || j <= *i);
        },
        {},
        [with_partner](const ProgramState& s, ProcessId j,
                       int) -> std::optional<LocalValue> {
          return with_partner(s, j, std::nullopt);
        }});
  }

  // Under arbitrary reads: update-married can clear the flag (and set it
  // when j has a partner), accept/propose can point at any neighbor, and
  // withdraw clears the pointer.
  auto rule = [g](ProcessId j, LocalValue current) {
    const bool married = current % 2 == 1;
    const bool has_partner = current / 2 != 0;
    std::vector<LocalValue> out;
    out.push_back(static_cast<LocalValue>(current - (married ? 1 : 0)));
    if (has_partner) out.push_back(static_cast<LocalValue>(current | 1));
    for (LocalValue slot = 0; slot <= g->degree(j); ++slot) {
      out.push_back(static_cast<LocalValue>(slot * 2 + (married ? 1 : 0)));
    }
    return out;
  };

  return StabilizingProgram("matching", graph, std::move(domains),
                            std::move(actions), InvariantKind::kSilent, rule);
}

StabilizingProgram make_program(std::string_view name, const CommGraph& graph) {
  if (name == "token-ring") return token_ring_program(graph.node_count());
  if (name == "coloring") return coloring_program(graph);
  if (name == "matching") return matching_program(graph);
  fail(ErrorKind::kUsage, "unknown program '" + std::string(name) +
                              "' (expected token-ring, coloring or matching)");
}

}  // namespace cvflab
