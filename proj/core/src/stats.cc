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

#include "geograde/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geograde/error.h"

namespace geograde::stats {
namespace {

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

void check_table(const Table2x2& t) {
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0) throw Error("BAD_VALUE", "negative cell count");
  if (t.n() == 0) throw Error("BAD_VALUE", "empty table");
}

// Upper tail of the chi-square distribution with one degree of freedom.
double chi2_sf_1(double x) { return x <= 0.0 ? 1.0 : std::erfc(std::sqrt(x / 2.0)); }

// Two-sided normal p-value.
double normal_two_sided(double z) { return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0))); }

// counts[u] = number of ways to choose which m of the m + n ranks belong to
// the first group so that its U equals u.
std::vector<double> u_distribution(int m, int n) {
  // f[i][j][u]: arrangements of i first-group and j second-group items.
  std::vector<std::vector<std::vector<double>>> f(
      m + 1, std::vector<std::vector<double>>(n + 1));
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) {
      f[i][j].assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        f[i][j][0] = 1.0;
        continue;
      }
      // Largest item from the first group beats all j second-group items.
      for (std::size_t u = 0; u < f[i - 1][j].size(); ++u) f[i][j][u + j] += f[i - 1][j][u];
      for (std::size_t u = 0; u < f[i][j - 1].size(); ++u) f[i][j][u] += f[i][j - 1][u];
    }
  }
  return f[m][n];
}

}  // namespace

bool Table2x2::degenerate() const {
  return a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0;
}

double hypergeometric_pmf(const Table2x2& t, std::int64_t x) {
  const std::int64_t r1 = t.a + t.b;
  const std::int64_t r2 = t.c + t.d;
  const std::int64_t c1 = t.a + t.c;
  const std::int64_t n = t.n();
  const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
  const std::int64_t hi = std::min(r1, c1);
  if (x < lo || x > hi) return 0.0;
  return std::exp(log_choose(r1, x) + log_choose(r2, c1 - x) - log_choose(n, c1));
}

TestResult fisher_exact(const Table2x2& t) {
  check_table(t);
  TestResult out;
  if (t.degenerate()) {
    out.degenerate = true;
    out.statistic = 1.0;
    return out;
  }
  const std::int64_t r2 = t.c + t.d;
  const std::int64_t c1 = t.a + t.c;
  const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
  const std::int64_t hi = std::min(t.a + t.b, c1);
  const double observed = hypergeometric_pmf(t, t.a);
  // Relative slack so tables tied with the observed one in exact arithmetic
  // are not lost to rounding.
  const double bound = observed * (1.0 + 1e-7);
  double p = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double px = hypergeometric_pmf(t, x);
    if (px <= bound) p += px;
  }
  out.statistic = observed;
  out.p_value = std::min(1.0, p);
  return out;
}

TestResult chi_square_yates(const Table2x2& t) {
  check_table(t);
  TestResult out;
  if (t.degenerate()) {
    out.degenerate = true;
    return out;
  }
  const double n = static_cast<double>(t.n());
  const double ad_bc = std::fabs(static_cast<double>(t.a) * t.d - static_cast<double>(t.b) * t.c);
  const double corrected = std::max(0.0, ad_bc - n / 2.0);
  const double denom = static_cast<double>(t.a + t.b) * (t.c + t.d) * (t.a + t.c) * (t.b + t.d);
  out.statistic = n * corrected * corrected / denom;
  out.p_value = chi2_sf_1(out.statistic);
  return out;
}

std::vector<double> midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw Error("EMPTY_GROUP", "both groups need at least one value");
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double v : pooled) {
    if (!std::isfinite(v)) throw Error("BAD_VALUE", "non-finite observation");
  }
  const std::vector<double> ranks = midranks(pooled);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + a.size(), 0.0);

  MannWhitneyResult out;
  out.u = rank_sum - na * (na + 1.0) / 2.0;

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (t > 1) ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  if (!ties && pooled.size() <= 20) {
    const std::vector<double> counts =
        u_distribution(static_cast<int>(a.size()), static_cast<int>(b.size()));
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto u = static_cast<std::size_t>(std::llround(out.u));
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (k <= u) lower += counts[k];
      if (k >= u) upper += counts[k];
    }
    out.exact = true;
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    return out;
  }

  const double n = na + nb;
  const double mu = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    out.p_value = 1.0;
    return out;
  }
  const double dev = std::max(0.0, std::fabs(out.u - mu) - 0.5);
  out.p_value = normal_two_sided(dev / std::sqrt(var));
  return out;
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw Error("EMPTY", "mean of no values");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(const std::vector<double>& x) {
  const double m = mean(x);
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("BAD_VALUE", "series differ in length");
  if (x.size() < 2) throw Error("BAD_VALUE", "correlation needs at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("ZERO_VARIANCE", "a series is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace geograde::stats
