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

#include "cvflab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cvflab/error.hpp"

namespace cvflab {

Rational ExactAccumulator::mean() const {
  if (count_ == 0) fail(ErrorKind::kEmpty, "mean of an empty accumulator");
  return sum_ / count_;
}

LineFit least_squares(std::span<const std::pair<double, double>> points) {
  const auto n = static_cast<double>(points.size());
  bool distinct = false;
  for (const auto& p : points) {
    if (p.first != points.front().first) {
      distinct = true;
      break;
    }
  }
  if (points.size() < 2 || !distinct) {
    fail(ErrorKind::kFit, "least squares needs at least two distinct x values");
  }

  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
      const double e = y - (fit.slope * x + fit.intercept);
      ss_res += e * e;
    }
    fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

std::int64_t round_half_away(const Rational& value) {
  using boost::multiprecision::abs;
  const Rational a = abs(value);
  const BigInt num = boost::multiprecision::numerator(a);
  const BigInt den = boost::multiprecision::denominator(a);
  // floor(a + 1/2) = floor((2 num + den) / (2 den))
  const BigInt rounded = (2 * num + den) / (2 * den);
  const auto magnitude = rounded.convert_to<std::int64_t>();
  return value < 0 ? -magnitude : magnitude;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace cvflab
