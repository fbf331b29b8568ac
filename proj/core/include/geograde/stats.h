// Copyright 2026 The Geograde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOGRADE_STATS_H_
#define GEOGRADE_STATS_H_

#include <cstdint>
#include <vector>

namespace geograde::stats {

// Rows are groups, columns outcomes: [[a, b], [c, d]].
struct Table2x2 {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;

  std::int64_t n() const { return a + b + c + d; }
  // A zero row or column total.
  bool degenerate() const;
  friend bool operator==(const Table2x2&, const Table2x2&) = default;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;
};

// P(top-left cell = x) for tables sharing the margins of `t`.
double hypergeometric_pmf(const Table2x2& t, std::int64_t x);

// Two-sided exact conditional test: the sum of probabilities of every table
// with the same margins that is no more likely than the observed one.
// statistic holds the observed table's probability. Degenerate margins give
// p = 1 with the flag set. Throws Error("BAD_VALUE") on negative cells or
// n = 0.
TestResult fisher_exact(const Table2x2& t);

// Pearson chi-square with Yates continuity correction, one degree of freedom.
TestResult chi_square_yates(const Table2x2& t);

struct MannWhitneyResult {
  // U for the first group: rank sum minus n_a (n_a + 1) / 2, midranks on ties.
  double u = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

// Exact null distribution when n_a + n_b <= 20 and there are no ties, normal
// approximation with tie-corrected variance and continuity correction
// otherwise. Throws Error("EMPTY_GROUP").
MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

// Midranks (1-based) of the pooled values.
std::vector<double> midranks(const std::vector<double>& values);

// Throws Error("EMPTY") on empty input.
double mean(const std::vector<double>& x);
// n - 1 denominator; 0 for a single value.
double sample_sd(const std::vector<double>& x);

// Throws Error("ZERO_VARIANCE") when either side is constant and
// Error("BAD_VALUE") on length mismatch or fewer than two points.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace geograde::stats

#endif  // GEOGRADE_STATS_H_
