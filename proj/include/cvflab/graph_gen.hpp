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

#ifndef CVFLAB_GRAPH_GEN_HPP_
#define CVFLAB_GRAPH_GEN_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "cvflab/program_model.hpp"

namespace cvflab {

enum class Topology { kRing, kPowerLaw, kRandomRegular };

Topology parse_topology(std::string_view name);
const char* to_string(Topology topology);

struct GraphSpec {
  Topology topology = Topology::kRing;
  std::size_t n = 0;
  std::size_t degree = 0;  // random-regular only
  std::size_t attach = 0;  // power-law only
  std::uint64_t seed = 0;
};

// Throws a usage error when the spec is infeasible.
void validate(const GraphSpec& spec);

/**
 * Seeded topology generators.
 *
 * ring: the cycle 0-1-...-(n-1)-0.
 * power-law: preferential attachment from an (m+1)-clique, each new node
 *   linking to m distinct existing nodes drawn proportionally to degree.
 * random-regular: pairing model, rejecting loops, multi-edges and
 *   disconnected results; gives up after 1000 attempts.
 */
CommGraph generate(const GraphSpec& spec);

// Edge-list text: one "u v" per line, u < v, ascending, LF endings.
void write_edge_list(const CommGraph& graph, std::ostream& out);
void write_edge_list(const CommGraph& graph, const std::filesystem::path& path);
CommGraph read_edge_list(std::istream& in);
CommGraph read_edge_list(const std::filesystem::path& path);

}  // namespace cvflab

#endif  // CVFLAB_GRAPH_GEN_HPP_
