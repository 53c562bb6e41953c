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

#ifndef CVFLAB_CVF_ANALYSIS_HPP_
#define CVFLAB_CVF_ANALYSIS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cvflab/program_model.hpp"
#include "cvflab/state_space.hpp"
#include "cvflab/stats.hpp"

namespace cvflab {

enum class CvfKind { kMax, kFeasible };

const char* to_string(CvfKind kind);
CvfKind parse_cvf_kind(std::string_view text);

struct Transition {
  StateIndex from = 0;
  StateIndex to = 0;
  ProcessId process = 0;

  bool operator==(const Transition&) const = default;
};

struct CvfSet {
  CvfKind kind = CvfKind::kFeasible;
  std::vector<Transition> transitions;
};

// Appends the cvfs out of state `s` in (process, target) order. The state
// must be indexable (|S_p| fits in 64 bits).
void append_cvfs(const StabilizingProgram& program, CvfKind kind, StateIndex s,
                 std::vector<Transition>& out);

// Index-free variant for spaces too large to index.
std::vector<std::pair<ProcessId, ProgramState>> cvf_targets(
    const StabilizingProgram& program, CvfKind kind, const ProgramState& s);

CvfSet enumerate_cvfs(const StateSpace& space, CvfKind kind);

// Program transitions with distinct targets, self-loops dropped.
std::vector<Transition> program_transitions(const StateSpace& space,
                                            bool outside_only);

enum class TransitionSource { kProgram, kCvf };

const char* to_string(TransitionSource source);

struct HistogramBin {
  std::uint64_t count = 0;
  double fraction = 0.0;
};

struct RankEffectHistogram {
  TransitionSource source = TransitionSource::kCvf;
  RankKind rank_kind = RankKind::kMax;
  std::uint64_t total = 0;
  std::map<std::int64_t, HistogramBin> bins;
};

// Throws an empty-histogram error when `counts` holds nothing.
RankEffectHistogram make_histogram(
    const std::map<std::int64_t, std::uint64_t>& counts,
    TransitionSource source, RankKind rank_kind);

// One rank effect: its floating value, its integer bin (half away from
// zero) and its exact sign.
struct EffectSample {
  double value = 0.0;
  std::int64_t bin = 0;
  int sign = 0;
};

EffectSample effect_sample(const RankTable& ranks, StateIndex s0,
                           StateIndex s1);
// For estimated (non-exact) ranks.
EffectSample effect_sample(double r0, double r1);

RankEffectHistogram histogram(const StateSpace& space, const RankTable& ranks,
                              std::span<const Transition> transitions,
                              TransitionSource source, bool outside_only);

/**
 * P(c) = A * B^(-c), fitted by least squares on (c, log10 fraction) over
 * the nonempty positive bins.
 */
struct ExponentialFit {
  double A = 0.0;
  double B = 0.0;
  double r2 = 0.0;

  double probability(double c) const;
};

// Throws a fit error with fewer than two nonempty positive bins.
ExponentialFit fit_exponential(const RankEffectHistogram& hist);

enum class AnalysisKind { kFull, kPartial };

const char* to_string(AnalysisKind kind);

struct AnalysisReport {
  RankKind rank_kind = RankKind::kMax;
  AnalysisKind analysis_kind = AnalysisKind::kFull;
  double effect_prog = 0.0;
  double effect_cvf = 0.0;
  double rel_cvf = 0.0;
  std::optional<ExponentialFit> fit;  // absent when the fit is undefined
  std::uint64_t program_samples = 0;
  std::uint64_t cvf_samples = 0;      // rank-increasing cvfs only
};

/**
 * Running totals behind a report. Sums are long double and must be merged
 * in a fixed order for reproducible output.
 */
class EffectTally {
 public:
  void add_program(const EffectSample& e);
  void add_cvf(const EffectSample& e);
  void merge(const EffectTally& other);

  // Throws a degenerate-report error without program effects or without
  // rank-increasing cvfs.
  AnalysisReport report(RankKind rank_kind, AnalysisKind analysis_kind) const;
  RankEffectHistogram program_histogram(RankKind rank_kind) const;
  RankEffectHistogram cvf_histogram(RankKind rank_kind) const;

 private:
  long double program_sum_ = 0.0L;
  std::uint64_t program_count_ = 0;
  long double increase_sum_ = 0.0L;
  std::uint64_t increase_count_ = 0;
  std::map<std::int64_t, std::uint64_t> program_bins_;
  std::map<std::int64_t, std::uint64_t> cvf_bins_;
};

struct FullAnalysis {
  AnalysisReport report;
  RankEffectHistogram program_histogram;
  RankEffectHistogram cvf_histogram;  // all signs, origins outside inv
};

// Streams every state outside inv; nothing is materialized.
FullAnalysis analyze_full(const StateSpace& space, const RankTable& ranks,
                          CvfKind kind, unsigned workers = 1);

AnalysisReport compute_report(const StateSpace& space, const RankTable& ranks,
                              const CvfSet& cvfs);

// Exact mean of rank(s1) - rank(s0) over the given transitions, unrounded
// and unrestricted.
Rational exact_mean_effect(const RankTable& ranks,
                           std::span<const Transition> transitions);

}  // namespace cvflab

#endif  // CVFLAB_CVF_ANALYSIS_HPP_
