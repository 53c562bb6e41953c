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

#ifndef CVFLAB_STATS_HPP_
#define CVFLAB_STATS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace cvflab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact running sum; merge is associative so partial sums can be combined in
// any grouping.
class ExactAccumulator {
 public:
  void add(const Rational& value) {
    sum_ += value;
    ++count_;
  }
  void merge(const ExactAccumulator& other) {
    sum_ += other.sum_;
    count_ += other.count_;
  }

  const Rational& sum() const { return sum_; }
  std::uint64_t count() const { return count_; }
  // Throws an empty-input error when nothing was added.
  Rational mean() const;

 private:
  Rational sum_ = 0;
  std::uint64_t count_ = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Ordinary least squares y = slope * x + intercept. Needs two distinct x
// values (fit error otherwise); r2 is 1 when y has zero variance.
LineFit least_squares(std::span<const std::pair<double, double>> points);

// Round half away from zero.
std::int64_t round_half_away(const Rational& value);

double to_double(const Rational& value);

// "%.6g"; non-finite values print as "nan", "inf", "-inf".
std::string format_float(double value);

}  // namespace cvflab

#endif  // CVFLAB_STATS_HPP_
