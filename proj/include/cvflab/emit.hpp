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

#ifndef CVFLAB_EMIT_HPP_
#define CVFLAB_EMIT_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvflab/cvf_analysis.hpp"
#include "cvflab/simulation.hpp"

namespace cvflab {

enum class Format { kCsv, kJson };

Format parse_format(std::string_view text);
const char* extension(Format format);

// Identifies the program instance on every emitted row.
struct RunLabel {
  std::string program;
  std::string topology;
  std::size_t n = 0;
};

// Column orders are fixed; new columns are only ever appended. Floats use
// 6 significant digits; JSON is a flat array of objects mirroring the CSV
// columns, with null for non-finite values.
//
// report:     program,topology,n,rank_kind,analysis_kind,effect_prog,
//             effect_cvf,rel_cvf,fit_A,fit_B,fit_r2
// histogram:  rank_effect,count,fraction,source,rank_kind
// simulation: program,topology,n,initial_state_index,cvf_interval,
//             baseline_steps,convergence_steps,converged_runs,ratio
// scatter:    program,topology,n,initial_state_index,cvf_interval,run,
//             baseline_steps,convergence_steps,baseline_converged,converged
void write_reports(std::ostream& out, const RunLabel& label,
                   std::span<const AnalysisReport> reports, Format format);
void write_histograms(std::ostream& out,
                      std::span<const RankEffectHistogram> histograms,
                      Format format);
void write_simulation(std::ostream& out, const RunLabel& label,
                      std::span<const SimOutcome> outcomes, Format format);
void write_scatter(std::ostream& out, const RunLabel& label,
                   std::span<const SimOutcome> outcomes, Format format);

// Writes through a temporary stream and reports failures with the path.
void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body);

struct ReportRow {
  RunLabel label;
  std::string rank_kind;
  std::string analysis_kind;
  double effect_prog = 0.0;
  double effect_cvf = 0.0;
  double rel_cvf = 0.0;
  double fit_A = 0.0;
  double fit_B = 0.0;
  double fit_r2 = 0.0;
};

std::vector<ReportRow> read_reports_csv(std::istream& in);

}  // namespace cvflab

#endif  // CVFLAB_EMIT_HPP_
