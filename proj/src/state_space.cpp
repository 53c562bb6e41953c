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

#include "cvflab/state_space.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "cvflab/error.hpp"
#include "parallel.hpp"

namespace cvflab {

namespace {

std::string describe(const StateSpace& space, StateIndex s) {
  std::string out = "<";
  const auto values = space.state(s);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(values[j]);
  }
  return out + "> (index " + std::to_string(s) + ")";
}

// Distinct successor states other than s itself, in ascending order.
template <class Fn>
void for_each_distinct_successor(const StateSpace& space, StateIndex s,
                                 Fn&& fn) {
  StateIndex last = s;
  for (StateIndex t : space.targets(s)) {
    if (t == s || t == last) continue;
    last = t;
    fn(t);
  }
}

[[noreturn]] void report_unranked(const StateSpace& space,
                                  const std::vector<bool>& ranked) {
  StateIndex s = 0;
  while (ranked[s]) ++s;
  bool has_exit = false;
  for_each_distinct_successor(space, s, [&](StateIndex) { has_exit = true; });
  if (!has_exit) {
    fail(ErrorKind::kStabilization,
         "state " + describe(space, s) + " is deadlocked outside the invariant");
  }
  // Every unranked state has an unranked successor, so following them from s
  // must revisit a state; that state lies on a cycle.
  std::vector<bool> seen(space.state_count());
  while (!seen[s]) {
    seen[s] = true;
    StateIndex next = s;
    for_each_distinct_successor(space, s, [&](StateIndex t) {
      if (next == s && !ranked[t]) next = t;
    });
    if (next == s) {
      fail(ErrorKind::kStabilization,
           "state " + describe(space, s) + " is deadlocked outside the invariant");
    }
    s = next;
  }
  fail(ErrorKind::kStabilization,
       "state " + describe(space, s) +
           " lies on a cycle outside the invariant; the program is not "
           "stabilizing");
}

// Reverse topological layers: layer 0 is inv, and a state joins the next
// layer once all its distinct successors are ranked. `rank_layer` computes
// the states of one layer, which only read ranks of earlier layers.
template <class RankLayer>
void process_layers(const StateSpace& space, unsigned workers,
                    RankLayer&& rank_layer) {
  const StateIndex count = space.state_count();
  std::vector<std::uint32_t> pending(count, 0);
  std::vector<bool> ranked(count, false);
  std::vector<StateIndex> layer;
  for (StateIndex s = 0; s < count; ++s) {
    if (space.in_invariant(s)) {
      layer.push_back(s);
      continue;
    }
    for_each_distinct_successor(space, s, [&](StateIndex) { ++pending[s]; });
  }

  std::uint64_t done = 0;
  bool first = true;
  while (!layer.empty()) {
    if (!first) rank_layer(std::span<const StateIndex>(layer), workers);
    first = false;
    for (StateIndex s : layer) ranked[s] = true;
    done += layer.size();

    std::vector<StateIndex> next;
    for (StateIndex s : layer) {
      for (StateIndex p : space.predecessors(s)) {
        if (space.in_invariant(p)) continue;
        if (--pending[p] == 0) next.push_back(p);
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  if (done < count) report_unranked(space, ranked);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), bytes);
  if (!in) fail(ErrorKind::kIo, "truncated rank dump");
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

std::uint64_t estimate_memory(const StabilizingProgram& program) {
  const auto states = program.state_count();
  if (!states) return std::numeric_limits<std::uint64_t>::max();
  // Offsets, flags and both rank tables, plus roughly one forward and one
  // reverse edge per process.
  const std::uint64_t per_state = 128 + 32 * program.process_count();
  if (*states > std::numeric_limits<std::uint64_t>::max() / per_state) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return *states * per_state;
}

StateSpace enumerate(const StabilizingProgram& program,
                     const SpaceOptions& options) {
  const auto bytes = estimate_memory(program);
  if (!program.state_count() || bytes > options.memory_budget) {
    fail(ErrorKind::kResource,
         "state space of " + program.name() + " has " +
             program.state_count_string() + " states (estimated " +
             (program.state_count() ? std::to_string(bytes) + " bytes"
                                    : std::string("more than 2^64 bytes")) +
             "), exceeding the memory budget of " +
             std::to_string(options.memory_budget) + " bytes");
  }

  const StateIndex count = *program.state_count();
  StateSpace space(program);

  struct Chunk {
    std::vector<std::uint8_t> invariant;
    std::vector<std::uint32_t> degree;
    std::vector<StateIndex> targets;
    std::vector<ProcessId> processes;
  };
  std::vector<Chunk> chunks(detail::chunk_count(count));
  detail::for_each_chunk(
      count, options.workers,
      [&](std::uint64_t c, StateIndex begin, StateIndex end) {
        Chunk& chunk = chunks[c];
        for (StateIndex s = begin; s < end; ++s) {
          const auto state = program.state_at(s);
          chunk.invariant.push_back(in_invariant(program, state));
          const auto next = successors(program, state);
          chunk.degree.push_back(static_cast<std::uint32_t>(next.size()));
          for (const auto& succ : next) {
            chunk.targets.push_back(program.index_of(succ.state));
            chunk.processes.push_back(succ.process);
          }
        }
      });

  space.invariant_.resize(count);
  space.offsets_.reserve(count + 1);
  space.offsets_.push_back(0);
  StateIndex s = 0;
  for (auto& chunk : chunks) {
    for (std::size_t i = 0; i < chunk.degree.size(); ++i, ++s) {
      space.invariant_[s] = chunk.invariant[i] != 0;
      space.invariant_count_ += chunk.invariant[i];
      space.offsets_.push_back(space.offsets_.back() + chunk.degree[i]);
    }
    space.targets_.insert(space.targets_.end(), chunk.targets.begin(),
                          chunk.targets.end());
    space.processes_.insert(space.processes_.end(), chunk.processes.begin(),
                            chunk.processes.end());
    chunk = Chunk{};
  }

  // Reverse adjacency over distinct non-self-loop edges; predecessors come
  // out in ascending order because sources are visited in order.
  space.reverse_offsets_.assign(count + 1, 0);
  for (StateIndex u = 0; u < count; ++u) {
    for_each_distinct_successor(
        space, u, [&](StateIndex t) { ++space.reverse_offsets_[t + 1]; });
  }
  for (StateIndex u = 0; u < count; ++u) {
    space.reverse_offsets_[u + 1] += space.reverse_offsets_[u];
  }
  space.reverse_.resize(space.reverse_offsets_[count]);
  std::vector<std::uint64_t> fill(space.reverse_offsets_.begin(),
                                  space.reverse_offsets_.end() - 1);
  for (StateIndex u = 0; u < count; ++u) {
    for_each_distinct_successor(
        space, u, [&](StateIndex t) { space.reverse_[fill[t]++] = u; });
  }
  return space;
}

const char* to_string(RankKind kind) {
  return kind == RankKind::kMax ? "max-rank" : "average-rank";
}

Rational RankTable::exact_rank(StateIndex s) const {
  if (kind_ == RankKind::kMax) return Rational(max_rank_.at(s));
  return Rational(total_length_.at(s), path_count_.at(s));
}

RankTable compute_max_rank(const StateSpace& space, unsigned workers) {
  RankTable table;
  table.kind_ = RankKind::kMax;
  table.max_rank_.assign(space.state_count(), 0);
  process_layers(space, workers,
                 [&](std::span<const StateIndex> layer, unsigned w) {
                   detail::for_each_chunk(
                       layer.size(), w,
                       [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
                         for (auto i = b; i < e; ++i) {
                           const StateIndex s = layer[i];
                           std::uint32_t best = 0;
                           for_each_distinct_successor(
                               space, s, [&](StateIndex t) {
                                 best = std::max(best, table.max_rank_[t]);
                               });
                           table.max_rank_[s] = best + 1;
                         }
                       });
                 });
  table.values_.assign(table.max_rank_.begin(), table.max_rank_.end());
  return table;
}

RankTable compute_average_rank(const StateSpace& space, unsigned workers) {
  RankTable table;
  table.kind_ = RankKind::kAverage;
  const StateIndex count = space.state_count();
  table.path_count_.assign(count, BigInt(1));
  table.total_length_.assign(count, BigInt(0));
  table.values_.assign(count, 0.0);
  // Every path from s0 is one step to some s1 followed by a path from s1, so
  // each of the pathCount(s1) continuations contributes one extra step.
  process_layers(
      space, workers, [&](std::span<const StateIndex> layer, unsigned w) {
        detail::for_each_chunk(
            layer.size(), w,
            [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
              for (auto i = b; i < e; ++i) {
                const StateIndex s = layer[i];
                BigInt paths = 0;
                BigInt total = 0;
                for_each_distinct_successor(space, s, [&](StateIndex t) {
                  paths += table.path_count_[t];
                  total += table.total_length_[t] + table.path_count_[t];
                });
                table.path_count_[s] = std::move(paths);
                table.total_length_[s] = std::move(total);
                table.values_[s] =
                    to_double(Rational(table.total_length_[s],
                                       table.path_count_[s]));
              }
            });
      });
  return table;
}

RankTable compute_ranks(const StateSpace& space, RankKind kind,
                        unsigned workers) {
  return kind == RankKind::kMax ? compute_max_rank(space, workers)
                                : compute_average_rank(space, workers);
}

Rational rank_effect(const RankTable& table, StateIndex s0, StateIndex s1) {
  if (s0 == s1) return Rational(0);
  return table.exact_rank(s1) - table.exact_rank(s0);
}

void write_rank_dump(const RankTable& table,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string());
  out.write("CVFR", 4);
  put_u32(out, 1);
  put_u32(out, table.kind() == RankKind::kMax ? 0 : 1);
  put_u64(out, table.state_count());
  for (double v : table.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

RankDump read_rank_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CVFR", 4) != 0) {
    fail(ErrorKind::kIo, path.string() + " is not a rank dump");
  }
  const auto version = get_le(in, 4);
  if (version != 1) {
    fail(ErrorKind::kIo, "unsupported rank dump version " +
                             std::to_string(version));
  }
  const auto kind = get_le(in, 4);
  if (kind > 1) fail(ErrorKind::kIo, "bad rank kind in " + path.string());
  RankDump dump;
  dump.kind = kind == 0 ? RankKind::kMax : RankKind::kAverage;
  const auto count = get_le(in, 8);
  for (std::uint64_t i = 0; i < count; ++i) {
    dump.ranks.push_back(std::bit_cast<double>(get_le(in, 8)));
  }
  return dump;
}

}  // namespace cvflab
