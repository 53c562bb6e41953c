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

// Independent reference models for tests. Nothing here calls into the
// library's transition code: programs are rewritten from their guarded
// commands over plain int vectors, and ranks come from explicit search.

#ifndef CVFLAB_TESTS_ORACLES_HPP_
#define CVFLAB_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using State = std::vector<int>;
// (process, resulting state) for every enabled action.
using Moves = std::vector<std::pair<int, State>>;

inline State with(State s, int j, int v) {
  s[j] = v;
  return s;
}

inline Moves token_ring_moves(const State& x) {
  const int n = static_cast<int>(x.size());
  Moves out;
  if ((x[0] + 1) % 3 == x[1]) out.emplace_back(0, with(x, 0, (x[0] + 2) % 3));
  for (int j = 1; j < n - 1; ++j) {
    if ((x[j] + 1) % 3 == x[j - 1]) out.emplace_back(j, with(x, j, x[j - 1]));
    if ((x[j] + 1) % 3 == x[j + 1]) out.emplace_back(j, with(x, j, x[j + 1]));
  }
  if (x[0] == x[n - 2] && (x[n - 2] + 1) % 3 != x[n - 1]) {
    out.emplace_back(n - 1, with(x, n - 1, x[n - 2]));
  }
  return out;
}

// Coloring on the ring 0..n-1 with three colors.
inline Moves ring_coloring_moves(const State& c) {
  const int n = static_cast<int>(c.size());
  Moves out;
  for (int j = 0; j < n; ++j) {
    const int l = c[(j + n - 1) % n];
    const int r = c[(j + 1) % n];
    if (c[j] != l && c[j] != r) continue;
    int m = 0;
    while (m == l || m == r) ++m;
    out.emplace_back(j, with(c, j, m));
  }
  return out;
}

inline std::size_t enabled_processes(const Moves& moves) {
  std::set<int> procs;
  for (const auto& m : moves) procs.insert(m.first);
  return procs.size();
}

inline bool token_ring_legit(const State& x) {
  return enabled_processes(token_ring_moves(x)) == 1;
}

inline bool ring_coloring_legit(const State& c) {
  return ring_coloring_moves(c).empty();
}

struct Model {
  std::function<Moves(const State&)> moves;
  std::function<bool(const State&)> legit;
};

inline Model token_ring() { return {token_ring_moves, token_ring_legit}; }
inline Model ring_coloring() {
  return {ring_coloring_moves, ring_coloring_legit};
}

// Distinct successor states other than x.
inline std::vector<State> next_states(const Model& m, const State& x) {
  std::set<State> out;
  for (auto& [j, y] : m.moves(x)) {
    if (y != x) out.insert(y);
  }
  return {out.begin(), out.end()};
}

// Longest path to a legitimate state by memoized depth-first search.
inline int longest_path(const Model& m, const State& x,
                        std::map<State, int>& memo) {
  if (m.legit(x)) return 0;
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  int best = -1;
  for (const auto& y : next_states(m, x)) {
    best = std::max(best, longest_path(m, y, memo));
  }
  return memo[x] = best + 1;
}

struct PathTotals {
  std::uint64_t count = 0;
  std::uint64_t total_length = 0;
};

// Walks every path from x to the first legitimate state, one by one.
inline void enumerate_paths(const Model& m, const State& x, std::uint64_t depth,
                            PathTotals& totals) {
  if (m.legit(x)) {
    ++totals.count;
    totals.total_length += depth;
    return;
  }
  for (const auto& y : next_states(m, x)) enumerate_paths(m, y, depth + 1, totals);
}

inline PathTotals all_paths(const Model& m, const State& x) {
  PathTotals t;
  enumerate_paths(m, x, 0, t);
  return t;
}

}  // namespace oracle

#endif  // CVFLAB_TESTS_ORACLES_HPP_
