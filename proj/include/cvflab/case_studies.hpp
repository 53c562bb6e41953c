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

#ifndef CVFLAB_CASE_STUDIES_HPP_
#define CVFLAB_CASE_STUDIES_HPP_

#include <optional>
#include <string_view>

#include "cvflab/program_model.hpp"

namespace cvflab {

// Dijkstra's 3-state ring, x.j in {0,1,2}. Action ids: process 0 has
// "decrement" (0); process n-1 has "copy-if" (0); the others have
// "copy-left" (0) and "copy-right" (1). Invariant: exactly one process
// enabled.
StabilizingProgram token_ring_program(std::size_t n);

// Min-free-color recoloring with Delta+1 colors; silent.
StabilizingProgram coloring_program(const CommGraph& graph);

// Pointer-based maximal matching with married flags; silent.
// Action ids: 0 update-married, 1 accept, 2 propose, 3 withdraw.
StabilizingProgram matching_program(const CommGraph& graph);

// "token-ring" | "coloring" | "matching". The token ring ignores the graph's
// edges and uses its node count.
StabilizingProgram make_program(std::string_view name, const CommGraph& graph);

namespace matching {

// Local value layout: (partner slot) * 2 + married, slot 0 = null and slot k
// = k-th smallest neighbor.
LocalValue encode(const CommGraph& graph, ProcessId j,
                  std::optional<ProcessId> partner, bool married);
std::optional<ProcessId> partner(const CommGraph& graph, const ProgramState& s,
                                 ProcessId j);
bool married_flag(const ProgramState& s, ProcessId j);
// PRmarried(j): j and its partner point at each other.
bool pr_married(const CommGraph& graph, const ProgramState& s, ProcessId j);

}  // namespace matching

}  // namespace cvflab

#endif  // CVFLAB_CASE_STUDIES_HPP_
