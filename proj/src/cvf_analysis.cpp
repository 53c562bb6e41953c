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

#include "cvflab/cvf_analysis.hpp"

#include <cmath>
#include <string>

#include "cvflab/error.hpp"
#include "parallel.hpp"

namespace cvflab {

namespace {

// Ranks closer than this (relative) are compared exactly.
constexpr double kExactSlack = 1e-9;

int exact_sign(const RankTable& ranks, StateIndex s0, StateIndex s1) {
  const BigInt lhs = ranks.total_path_length(s1) * ranks.path_count(s0);
  const BigInt rhs = ranks.total_path_length(s0) * ranks.path_count(s1);
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

template <class Fn>
void for_each_program_target(const StateSpace& space, StateIndex s, Fn&& fn) {
  StateIndex last = s;
  for (StateIndex t : space.targets(s)) {
    if (t == s || t == last) continue;
    last = t;
    fn(t);
  }
}

}  // namespace

const char* to_string(CvfKind kind) {
  return kind == CvfKind::kMax ? "max" : "feasible";
}

CvfKind parse_cvf_kind(std::string_view text) {
  if (text == "max") return CvfKind::kMax;
  if (text == "feasible") return CvfKind::kFeasible;
  fail(ErrorKind::kUsage, "unknown cvf kind '" + std::string(text) +
                              "' (expected max or feasible)");
}

const char* to_string(TransitionSource source) {
  return source == TransitionSource::kProgram ? "program" : "cvf";
}

const char* to_string(AnalysisKind kind) {
  return kind == AnalysisKind::kFull ? "full" : "partial";
}

void append_cvfs(const StabilizingProgram& program, CvfKind kind, StateIndex s,
                 std::vector<Transition>& out) {
  for (ProcessId j = 0; j < program.process_count(); ++j) {
    const StateIndex w = program.weight(j);
    const auto current = static_cast<LocalValue>((s / w) % program.domain_size(j));
    const StateIndex base = s - current * w;
    if (kind == CvfKind::kMax) {
      for (LocalValue v = 0; v < program.domain_size(j); ++v) {
        if (v != current) out.push_back({s, base + v * w, j});
      }
    } else {
      for (LocalValue v : program.perturbation_targets(j, current)) {
        out.push_back({s, base + v * w, j});
      }
    }
  }
}

std::vector<std::pair<ProcessId, ProgramState>> cvf_targets(
    const StabilizingProgram& program, CvfKind kind, const ProgramState& s) {
  std::vector<std::pair<ProcessId, ProgramState>> out;
  for (ProcessId j = 0; j < program.process_count(); ++j) {
    auto add = [&](LocalValue v) {
      ProgramState t = s;
      t[j] = v;
      out.emplace_back(j, std::move(t));
    };
    if (kind == CvfKind::kMax) {
      for (LocalValue v = 0; v < program.domain_size(j); ++v) {
        if (v != s[j]) add(v);
      }
    } else {
      for (LocalValue v : program.perturbation_targets(j, s[j])) add(v);
    }
  }
  return out;
}

CvfSet enumerate_cvfs(const StateSpace& space, CvfKind kind) {
  CvfSet set;
  set.kind = kind;
  for (StateIndex s = 0; s < space.state_count(); ++s) {
    append_cvfs(space.program(), kind, s, set.transitions);
  }
  return set;
}

std::vector<Transition> program_transitions(const StateSpace& space,
                                            bool outside_only) {
  std::vector<Transition> out;
  for (StateIndex s = 0; s < space.state_count(); ++s) {
    if (outside_only && space.in_invariant(s)) continue;
    const auto targets = space.targets(s);
    const auto procs = space.processes(s);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] == s || (i > 0 && targets[i] == targets[i - 1])) continue;
      out.push_back({s, targets[i], procs[i]});
    }
  }
  return out;
}

RankEffectHistogram make_histogram(
    const std::map<std::int64_t, std::uint64_t>& counts,
    TransitionSource source, RankKind rank_kind) {
  RankEffectHistogram hist;
  hist.source = source;
  hist.rank_kind = rank_kind;
  for (const auto& [bin, count] : counts) hist.total += count;
  if (hist.total == 0) {
    fail(ErrorKind::kEmpty, std::string("no ") + to_string(source) +
                                " transitions to build a histogram from");
  }
  for (const auto& [bin, count] : counts) {
    if (count == 0) continue;
    hist.bins[bin] = {count, static_cast<double>(count) /
                                 static_cast<double>(hist.total)};
  }
  return hist;
}

EffectSample effect_sample(const RankTable& ranks, StateIndex s0,
                           StateIndex s1) {
  EffectSample e;
  if (s0 == s1) return e;
  if (ranks.kind() == RankKind::kMax) {
    const auto d = static_cast<std::int64_t>(ranks.rank(s1)) -
                   static_cast<std::int64_t>(ranks.rank(s0));
    e.value = static_cast<double>(d);
    e.bin = d;
    e.sign = (d > 0) - (d < 0);
    return e;
  }
  const double r0 = ranks.rank(s0);
  const double r1 = ranks.rank(s1);
  e.value = r1 - r0;
  const double scale = std::max({1.0, std::abs(r0), std::abs(r1)});
  const double a = std::abs(e.value);
  if (a <= kExactSlack * scale) {
    e.sign = exact_sign(ranks, s0, s1);
    if (e.sign == 0) e.value = 0.0;
  } else {
    e.sign = e.value > 0 ? 1 : -1;
  }
  if (std::abs(a - std::floor(a) - 0.5) <= kExactSlack * scale) {
    e.bin = round_half_away(rank_effect(ranks, s0, s1));
  } else {
    e.bin = std::llround(e.value);
  }
  return e;
}

EffectSample effect_sample(double r0, double r1) {
  EffectSample e;
  e.value = r1 - r0;
  e.bin = std::llround(e.value);
  e.sign = (e.value > 0) - (e.value < 0);
  return e;
}

RankEffectHistogram histogram(const StateSpace& space, const RankTable& ranks,
                              std::span<const Transition> transitions,
                              TransitionSource source, bool outside_only) {
  std::map<std::int64_t, std::uint64_t> counts;
  for (const auto& t : transitions) {
    if (outside_only && space.in_invariant(t.from)) continue;
    ++counts[effect_sample(ranks, t.from, t.to).bin];
  }
  return make_histogram(counts, source, ranks.kind());
}

double ExponentialFit::probability(double c) const {
  return A * std::pow(B, -c);
}

ExponentialFit fit_exponential(const RankEffectHistogram& hist) {
  std::vector<std::pair<double, double>> points;
  for (const auto& [bin, cell] : hist.bins) {
    if (bin > 0 && cell.count > 0) {
      points.emplace_back(static_cast<double>(bin), std::log10(cell.fraction));
    }
  }
  if (points.size() < 2) {
    fail(ErrorKind::kFit, "exponential fit needs at least two nonempty "
                          "positive bins, got " +
                              std::to_string(points.size()));
  }
  const LineFit line = least_squares(points);
  return {std::pow(10.0, line.intercept), std::pow(10.0, -line.slope),
          line.r2};
}

void EffectTally::add_program(const EffectSample& e) {
  program_sum_ += e.value;
  ++program_count_;
  ++program_bins_[e.bin];
}

void EffectTally::add_cvf(const EffectSample& e) {
  ++cvf_bins_[e.bin];
  if (e.sign > 0) {
    increase_sum_ += e.value;
    ++increase_count_;
  }
}

void EffectTally::merge(const EffectTally& other) {
  program_sum_ += other.program_sum_;
  program_count_ += other.program_count_;
  increase_sum_ += other.increase_sum_;
  increase_count_ += other.increase_count_;
  for (const auto& [bin, count] : other.program_bins_) program_bins_[bin] += count;
  for (const auto& [bin, count] : other.cvf_bins_) cvf_bins_[bin] += count;
}

AnalysisReport EffectTally::report(RankKind rank_kind,
                                   AnalysisKind analysis_kind) const {
  if (program_count_ == 0) {
    fail(ErrorKind::kDegenerate,
         "no program transitions outside the invariant; effect_prog is "
         "undefined");
  }
  if (increase_count_ == 0) {
    fail(ErrorKind::kDegenerate,
         "no rank-increasing cvfs outside the invariant; effect_cvf is "
         "undefined");
  }
  AnalysisReport r;
  r.rank_kind = rank_kind;
  r.analysis_kind = analysis_kind;
  r.program_samples = program_count_;
  r.cvf_samples = increase_count_;
  r.effect_prog = static_cast<double>(program_sum_ / program_count_);
  r.effect_cvf = static_cast<double>(increase_sum_ / increase_count_);
  r.rel_cvf = static_cast<double>(-(increase_sum_ / increase_count_) /
                                  (program_sum_ / program_count_));
  try {
    r.fit = fit_exponential(cvf_histogram(rank_kind));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kFit) throw;
  }
  return r;
}

RankEffectHistogram EffectTally::program_histogram(RankKind rank_kind) const {
  return make_histogram(program_bins_, TransitionSource::kProgram, rank_kind);
}

RankEffectHistogram EffectTally::cvf_histogram(RankKind rank_kind) const {
  return make_histogram(cvf_bins_, TransitionSource::kCvf, rank_kind);
}

FullAnalysis analyze_full(const StateSpace& space, const RankTable& ranks,
                          CvfKind kind, unsigned workers) {
  const StateIndex count = space.state_count();
  std::vector<EffectTally> partial(detail::chunk_count(count));
  detail::for_each_chunk(
      count, workers, [&](std::uint64_t c, StateIndex begin, StateIndex end) {
        EffectTally& tally = partial[c];
        std::vector<Transition> cvfs;
        for (StateIndex s = begin; s < end; ++s) {
          if (space.in_invariant(s)) continue;
          for_each_program_target(space, s, [&](StateIndex t) {
            tally.add_program(effect_sample(ranks, s, t));
          });
          cvfs.clear();
          append_cvfs(space.program(), kind, s, cvfs);
          for (const auto& t : cvfs) {
            tally.add_cvf(effect_sample(ranks, t.from, t.to));
          }
        }
      });
  EffectTally total;
  for (const auto& t : partial) total.merge(t);

  FullAnalysis out{total.report(ranks.kind(), AnalysisKind::kFull),
                   total.program_histogram(ranks.kind()),
                   total.cvf_histogram(ranks.kind())};
  return out;
}

AnalysisReport compute_report(const StateSpace& space, const RankTable& ranks,
                              const CvfSet& cvfs) {
  EffectTally tally;
  for (const auto& t : program_transitions(space, true)) {
    tally.add_program(effect_sample(ranks, t.from, t.to));
  }
  for (const auto& t : cvfs.transitions) {
    if (space.in_invariant(t.from)) continue;
    tally.add_cvf(effect_sample(ranks, t.from, t.to));
  }
  return tally.report(ranks.kind(), AnalysisKind::kFull);
}

Rational exact_mean_effect(const RankTable& ranks,
                           std::span<const Transition> transitions) {
  ExactAccumulator acc;
  for (const auto& t : transitions) acc.add(rank_effect(ranks, t.from, t.to));
  return acc.mean();
}

}  // namespace cvflab
