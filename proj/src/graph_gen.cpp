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

#include "cvflab/graph_gen.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "cvflab/error.hpp"
#include "rng.hpp"

namespace cvflab {

namespace {

constexpr int kMaxAttempts = 1000;

CommGraph power_law(const GraphSpec& spec, detail::Rng& rng) {
  const std::size_t m = spec.attach;
  std::vector<Edge> edges;
  std::vector<std::uint64_t> degree(spec.n, 0);
  for (ProcessId u = 0; u <= m; ++u) {
    for (ProcessId v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
  }
  for (auto node = static_cast<ProcessId>(m + 1); node < spec.n; ++node) {
    std::vector<ProcessId> chosen;
    std::vector<bool> taken(node, false);
    std::uint64_t remaining = 0;
    for (ProcessId u = 0; u < node; ++u) remaining += degree[u];
    while (chosen.size() < m) {
      std::uint64_t r = detail::uniform_below(rng, remaining);
      ProcessId pick = 0;
      for (ProcessId u = 0; u < node; ++u) {
        if (taken[u]) continue;
        if (r < degree[u]) {
          pick = u;
          break;
        }
        r -= degree[u];
      }
      taken[pick] = true;
      remaining -= degree[pick];
      chosen.push_back(pick);
    }
    for (ProcessId u : chosen) {
      edges.emplace_back(u, node);
      ++degree[u];
      ++degree[node];
    }
  }
  return CommGraph::from_edges(spec.n, edges);
}

// Pairs free stubs one edge at a time, only ever accepting pairs that keep
// the graph simple; gives up when no acceptable pair is left.
std::optional<CommGraph> random_regular_attempt(const GraphSpec& spec,
                                                detail::Rng& rng) {
  std::vector<ProcessId> stubs;
  stubs.reserve(spec.n * spec.degree);
  for (ProcessId u = 0; u < spec.n; ++u) {
    for (std::size_t k = 0; k < spec.degree; ++k) stubs.push_back(u);
  }
  std::set<Edge> edges;
  auto usable = [&](ProcessId u, ProcessId v) {
    return u != v && !edges.contains(std::minmax(u, v));
  };
  while (!stubs.empty()) {
    const std::size_t m = stubs.size();
    bool paired = false;
    for (int draw = 0; draw < 64 && !paired; ++draw) {
      const std::size_t i = detail::uniform_below(rng, m);
      const std::size_t j = detail::uniform_below(rng, m);
      if (i == j || !usable(stubs[i], stubs[j])) continue;
      edges.insert(std::minmax(stubs[i], stubs[j]));
      // Remove the higher index first so the lower one stays valid.
      for (std::size_t k : {std::max(i, j), std::min(i, j)}) {
        stubs[k] = stubs.back();
        stubs.pop_back();
      }
      paired = true;
    }
    if (paired) continue;
    bool any = false;
    for (std::size_t i = 0; i < m && !any; ++i) {
      for (std::size_t j = i + 1; j < m && !any; ++j) {
        any = usable(stubs[i], stubs[j]);
      }
    }
    if (!any) return std::nullopt;
  }
  std::vector<Edge> list(edges.begin(), edges.end());
  auto graph = CommGraph::from_edges(spec.n, list);
  if (!graph.connected()) return std::nullopt;
  return graph;
}

}  // namespace

Topology parse_topology(std::string_view name) {
  if (name == "ring") return Topology::kRing;
  if (name == "power-law") return Topology::kPowerLaw;
  if (name == "random-regular") return Topology::kRandomRegular;
  fail(ErrorKind::kUsage, "unknown topology '" + std::string(name) +
                              "' (expected ring, power-law or random-regular)");
}

const char* to_string(Topology topology) {
  switch (topology) {
    case Topology::kRing: return "ring";
    case Topology::kPowerLaw: return "power-law";
    case Topology::kRandomRegular: return "random-regular";
  }
  return "?";
}

void validate(const GraphSpec& spec) {
  if (spec.n < 3) {
    fail(ErrorKind::kUsage, "graph needs n >= 3, got " + std::to_string(spec.n));
  }
  switch (spec.topology) {
    case Topology::kRing:
      break;
    case Topology::kPowerLaw:
      if (spec.attach < 1 || spec.attach >= spec.n) {
        fail(ErrorKind::kUsage, "power-law needs 1 <= attach < n");
      }
      break;
    case Topology::kRandomRegular:
      if (spec.degree < 1 || spec.degree >= spec.n) {
        fail(ErrorKind::kUsage, "random-regular needs 1 <= degree < n, got degree " +
                                    std::to_string(spec.degree) + " with n " +
                                    std::to_string(spec.n));
      }
      if ((spec.n * spec.degree) % 2 != 0) {
        fail(ErrorKind::kUsage, "random-regular needs n * degree even");
      }
      break;
  }
}

CommGraph generate(const GraphSpec& spec) {
  validate(spec);
  switch (spec.topology) {
    case Topology::kRing:
      return CommGraph::ring(spec.n);
    case Topology::kPowerLaw: {
      detail::Rng rng(detail::derive_seed(spec.seed, {1}));
      return power_law(spec, rng);
    }
    case Topology::kRandomRegular:
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        detail::Rng rng(detail::derive_seed(
            spec.seed, {2, static_cast<std::uint64_t>(attempt)}));
        if (auto graph = random_regular_attempt(spec, rng)) return *graph;
      }
      fail(ErrorKind::kGeneration,
           "no simple connected " + std::to_string(spec.degree) +
               "-regular graph on " + std::to_string(spec.n) + " nodes after " +
               std::to_string(kMaxAttempts) + " pairing attempts");
  }
  fail(ErrorKind::kUsage, "unknown topology");
}

void write_edge_list(const CommGraph& graph, std::ostream& out) {
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list(const CommGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  write_edge_list(graph, out);
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

CommGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t node_count = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0) {
      fail(ErrorKind::kUsage,
           "malformed edge on line " + std::to_string(line_no) + ": '" + line + "'");
    }
    edges.emplace_back(static_cast<ProcessId>(u), static_cast<ProcessId>(v));
    node_count = std::max<std::size_t>(node_count, std::max(u, v) + 1);
  }
  std::sort(edges.begin(), edges.end(), [](Edge a, Edge b) {
    return std::minmax(a.first, a.second) < std::minmax(b.first, b.second);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (std::minmax(edges[i].first, edges[i].second) ==
        std::minmax(edges[i - 1].first, edges[i - 1].second)) {
      fail(ErrorKind::kUsage, "duplicate edge in edge list");
    }
  }
  return CommGraph::from_edges(node_count, edges);
}

CommGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return read_edge_list(in);
}

}  // namespace cvflab
