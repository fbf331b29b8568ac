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

// End-to-end acceptance gate. Runs every criterion and prints one PASS or
// FAIL line per criterion; exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "constructions.h"
#include "field_fixture.h"
#include "geograde/analytics.h"
#include "geograde/capsule.h"
#include "geograde/datastore.h"
#include "geograde/feedback.h"
#include "geograde/geometry.h"
#include "geograde/grading.h"
#include "geograde/judge.h"
#include "geograde/question.h"
#include "geograde/report.h"
#include "geograde/service.h"
#include "geograde/simulate.h"
#include "geograde/stats.h"

namespace {

using namespace geograde;
namespace g = geograde::geometry;
namespace fx = geograde::fixtures;
namespace t = geograde::testing;

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::string summary;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double value(const Rate& r) { return r.value().value_or(-1.0); }

// 1. Geometry oracles on seeded random triangles.
Outcome geometry_oracles() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  const g::Tolerances tol;
  double worst_equidistance = 0.0;
  double worst_angle_sum = 0.0;
  double worst_bisector = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto tri = t::random_triangle(rng);
    const g::Point c = g::circumcenter(tri.a, tri.b, tri.c);
    const double ra = g::distance(c, tri.a);
    const double rb = g::distance(c, tri.b);
    const double rc = g::distance(c, tri.c);
    worst_equidistance = std::max({worst_equidistance, std::abs(ra - rb) / ra, std::abs(ra - rc) / ra});
    const g::Point x = g::line_intersection(g::perpendicular_bisector(tri.a, tri.b),
                                            g::perpendicular_bisector(tri.b, tri.c));
    worst_bisector = std::max(worst_bisector, g::distance(x, c));
    o.check(g::points_coincide(x, c, tol), "bisector intersection differs from circumcenter");
    const double sum = g::interior_angle(tri.b, tri.a, tri.c) + g::interior_angle(tri.a, tri.b, tri.c) +
                       g::interior_angle(tri.a, tri.c, tri.b);
    worst_angle_sum = std::max(worst_angle_sum, std::abs(sum - 180.0));
  }
  o.check(worst_equidistance <= 1e-9, "equidistance error " + fmt("%.3g", worst_equidistance));
  o.check(worst_angle_sum <= 1e-9, "angle sum error " + fmt("%.3g", worst_angle_sum));
  double worst_right = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto tri = t::random_right_triangle(rng);
    const g::Point c = g::circumcenter(tri.a, tri.b, tri.c);
    const g::Point m = g::midpoint(g::Segment(tri.a, tri.b));
    worst_right = std::max(worst_right, g::distance(c, m));
    o.check(g::points_coincide(c, m, tol), "right-triangle circumcenter off the hypotenuse midpoint");
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  o.summary = "1000 triangles, equidistance " + fmt("%.2g", worst_equidistance) + ", angle sum " +
              fmt("%.2g", worst_angle_sum) + ", right-triangle offset " + fmt("%.2g", worst_right) + ", " +
              fmt("%.3f s", elapsed);
  return o;
}

// 2. Item statistics over the reconstructed cohort log.
Outcome item_response_replay() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto raw = fx::field_study_log();
  const CleanLog log = clean(raw, fx::kMaxAttempts);
  o.check(log.dropped() == 0, "fixture log is not clean");
  for (const auto& c : fx::item_response_counts()) {
    const Rate d = difficulty_index(log.records, c.question_id);
    o.check(d.numerator == c.solved_at[0] && d.denominator == fx::kCohortSize - c.not_attempted,
            c.question_id + " difficulty counts differ from the cohort table");
  }
  const double q8 = value(difficulty_index(log.records, "Q8"));
  o.check(std::abs(q8 - 0.909) <= 0.001, "Q8 difficulty " + fmt("%.4f", q8));
  double lo = 1.0;
  double hi = 0.0;
  std::string lo_id;
  for (const auto& id : fx::question_order()) {
    const double v = value(difficulty_index(log.records, id));
    if (v < lo) {
      lo = v;
      lo_id = id;
    }
    hi = std::max(hi, v);
  }
  o.check(std::abs(lo - 0.42) <= 0.01, "lowest difficulty " + fmt("%.3f", lo) + " (" + lo_id + "), expected 0.42");
  o.check(std::abs(hi - 0.91) <= 0.01, "highest difficulty " + fmt("%.3f", hi) + ", expected 0.91");
  const LearningCurve curve = learning_curve(log.records, 50);
  o.check(curve.excluded == std::vector<std::string>{"Q12", "Q14"}, "excluded items are not Q12 and Q14");
  const double target[] = {0.60, 0.73, 0.78, 0.80};
  std::string curve_text;
  for (int k = 0; k < kCurveAttempts; ++k) {
    const double v = value(curve.aggregate[k]);
    curve_text += (k ? "/" : "") + fmt("%.3f", v);
    o.check(std::abs(v - target[k]) <= 0.02, "curve at attempt " + std::to_string(k + 1) + " " + fmt("%.3f", v));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  o.summary = "Q8 " + fmt("%.3f", q8) + ", range [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) +
              "], curve " + curve_text + ", " + fmt("%.3f s", elapsed);
  return o;
}

// 3. Post-feedback conversion rates.
Outcome conversion_rates() {
  Outcome o;
  const auto log = clean(fx::conversion_log(), fx::kMaxAttempts).records;
  const auto overall = conversion_rate(log, ConversionGrouping::kOverall);
  const Rate all = overall.at(0).second;
  o.check(all.numerator == 260 && all.denominator == 708, "overall counts " + format_rate(all));
  o.check(std::abs(value(all) - 0.367) <= 0.0005, "overall rate " + fmt("%.4f", value(all)));
  const auto per_type = conversion_rate(log, ConversionGrouping::kPerType, fx::question_types());
  const std::map<std::string, double> expected = {{"CLOSED", 55.1}, {"CGT", 35.6}, {"OPEN", 33.9}};
  std::string text;
  for (const auto& [type, rate] : per_type) {
    const double pct = 100.0 * value(rate);
    text += " " + type + " " + fmt("%.1f", pct);
    const auto it = expected.find(type);
    o.check(it != expected.end() && std::abs(pct - it->second) <= 0.1, type + " rate " + fmt("%.2f", pct));
  }
  o.check(per_type.size() == 3, "expected three type groups");
  o.summary = "overall " + format_rate(all) + " = " + fmt("%.4f", value(all)) + ";" + text;
  return o;
}

// 4. Agreement rates and kappa.
Outcome agreement() {
  Outcome o;
  const auto pairs = load_judgments(t::data_dir() / "fixtures" / "grading_judgments.json");
  const AgreementSplit split = agreement_by_judgment(pairs);
  o.check(format_rate(split.system_correct) == "0.953" && split.system_correct.numerator == 406 &&
              split.system_correct.denominator == 426,
          "system-correct agreement " + format_rate(split.system_correct));
  o.check(format_rate(split.system_incorrect) == "0.772" && split.system_incorrect.numerator == 349 &&
              split.system_incorrect.denominator == 452,
          "system-incorrect agreement " + format_rate(split.system_incorrect));
  const auto hand = cohens_kappa(stats::Table2x2{4, 1, 1, 4});
  o.check(hand.kappa && std::abs(*hand.kappa - 0.6) <= 1e-12, "hand kappa");
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cell(0, 40);
  int symmetric = 0;
  int perfect = 0;
  for (int i = 0; i < 1000; ++i) {
    const stats::Table2x2 tab{cell(rng), cell(rng), cell(rng), cell(rng)};
    if (tab.n() == 0) continue;
    const auto k1 = cohens_kappa(tab);
    const auto k2 = cohens_kappa(stats::Table2x2{tab.a, tab.c, tab.b, tab.d});
    const bool same = (!k1.kappa && !k2.kappa) || (k1.kappa && k2.kappa && std::abs(*k1.kappa - *k2.kappa) <= 1e-12);
    symmetric += same;
    o.check(same, "kappa not symmetric under rater swap");
    const stats::Table2x2 diag{tab.a + 1, 0, 0, tab.d + 1};
    const auto kd = cohens_kappa(diag);
    const bool one = kd.kappa && std::abs(*kd.kappa - 1.0) <= 1e-12;
    perfect += one;
    o.check(one, "kappa of a diagonal table is not 1");
  }
  o.summary = "0.953 (406/426), 0.772 (349/452), hand kappa " + fmt("%.12f", hand.kappa.value_or(NAN)) +
              ", symmetry " + std::to_string(symmetric) + "/1000, unit " + std::to_string(perfect) + "/1000";
  return o;
}

// Exact binomial coefficient; every value used here fits in 64 bits.
std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(r);
}

// Two-sided Fisher p by enumerating every table with the observed margins
// in integer arithmetic. Tables count as extreme when their weight is at
// most the observed weight times (1 + 1e-7).
double fisher_by_enumeration(int a, int b, int c, int d) {
  const int r1 = a + b;
  const int r2 = c + d;
  const int c1 = a + c;
  const int n = r1 + r2;
  const long double total = static_cast<long double>(choose(n, c1));
  const long double observed = static_cast<long double>(choose(r1, a)) * choose(r2, c);
  long double extreme = 0;
  for (int x = std::max(0, c1 - r2); x <= std::min(r1, c1); ++x) {
    const long double w = static_cast<long double>(choose(r1, x)) * choose(r2, c1 - x);
    if (w <= observed * (1 + 1e-7L)) extreme += w;
  }
  return static_cast<double>(std::min<long double>(1, extreme / total));
}

// Exact two-sided Mann-Whitney p by enumerating every labelling of the
// pooled (tie-free) sample.
double mann_whitney_by_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const int n = static_cast<int>(pooled.size());
  const int na = static_cast<int>(a.size());
  auto u_of = [&](const std::vector<bool>& in_a) {
    double u = 0;
    for (int i = 0; i < n; ++i) {
      if (!in_a[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (!in_a[j] && pooled[i] > pooled[j]) u += 1;
      }
    }
    return u;
  };
  std::vector<bool> observed(n, false);
  std::fill(observed.begin(), observed.begin() + na, true);
  const double u_obs = u_of(observed);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + na, true);
  std::int64_t le = 0;
  std::int64_t ge = 0;
  std::int64_t total = 0;
  std::sort(mask.begin(), mask.end());
  do {
    const double u = u_of(mask);
    le += u <= u_obs;
    ge += u >= u_obs;
    ++total;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

// 5. Exact tests against enumeration oracles.
Outcome exact_tests() {
  Outcome o;
  double worst = 0.0;
  std::int64_t tables = 0;
  for (int n = 1; n <= 60; ++n) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        for (int c = 0; a + b + c <= n; ++c) {
          const int d = n - a - b - c;
          const stats::TestResult r = stats::fisher_exact(stats::Table2x2{a, b, c, d});
          const double oracle = fisher_by_enumeration(a, b, c, d);
          worst = std::max(worst, std::abs(r.p_value - oracle));
          ++tables;
        }
      }
    }
  }
  o.check(worst <= 1e-12, "Fisher deviates from enumeration by " + fmt("%.3g", worst));
  const double q10 = stats::fisher_exact(stats::Table2x2{37, 25, 10, 4}).p_value;
  o.check(q10 >= 0.50 && q10 <= 0.60, "Q10 carry-over p " + fmt("%.4f", q10));

  double worst_mw = 0.0;
  int cases = 0;
  for (int total = 2; total <= 10; ++total) {
    std::vector<double> values(total);
    std::iota(values.begin(), values.end(), 1.0);
    for (int na = 1; na < total; ++na) {
      std::vector<bool> mask(total, false);
      std::fill(mask.begin(), mask.begin() + na, true);
      std::sort(mask.begin(), mask.end());
      do {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < total; ++i) (mask[i] ? a : b).push_back(values[i]);
        const auto r = stats::mann_whitney_u(a, b);
        o.check(r.exact, "Mann-Whitney did not take the exact path");
        worst_mw = std::max(worst_mw, std::abs(r.p_value - mann_whitney_by_enumeration(a, b)));
        ++cases;
      } while (std::next_permutation(mask.begin(), mask.end()));
    }
  }
  o.check(worst_mw <= 1e-12, "Mann-Whitney deviates from enumeration by " + fmt("%.3g", worst_mw));
  o.summary = std::to_string(tables) + " tables (max dev " + fmt("%.2g", worst) + "), Q10 p " +
              fmt("%.4f", q10) + ", " + std::to_string(cases) + " rank splits (max dev " +
              fmt("%.2g", worst_mw) + ")";
  return o;
}

double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// 6. Leave-one-out discrimination.
Outcome discrimination() {
  Outcome o;
  ScoreGrid grid;
  grid.students = {"S1", "S2", "S3", "S4"};
  grid.questions = {"Q1", "Q2", "Q3"};
  grid.scores = {{1, 0, 1}, {1, 1, 1}, {0, 0, 1}, {0, 1, 0}};
  double worst = 0.0;
  for (std::size_t q = 0; q < 3; ++q) {
    std::vector<double> item, rest;
    for (const auto& row : grid.scores) {
      item.push_back(row[q]);
      double r = 0;
      for (std::size_t j = 0; j < 3; ++j) r += j == q ? 0 : row[j];
      rest.push_back(r);
    }
    worst = std::max(worst, std::abs(discrimination_loo(grid, q) - direct_pearson(item, rest)));
  }
  o.check(worst <= 1e-12, "hand grid deviates by " + fmt("%.3g", worst));

  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.55);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  int held = 0;
  int grids = 0;
  while (grids < 100) {
    ScoreGrid r;
    for (int s = 0; s < 12; ++s) {
      r.students.push_back("S" + std::to_string(s));
      std::vector<double> row;
      for (int q = 0; q < 5; ++q) row.push_back(coin(rng) ? 1.0 : 0.0);
      r.scores.push_back(row);
    }
    for (int q = 0; q < 5; ++q) r.questions.push_back("Q" + std::to_string(q + 1));
    double base;
    try {
      base = discrimination_loo(r, 0);
    } catch (const Error&) {
      continue;  // zero variance; draw again
    }
    ++grids;
    ScoreGrid shifted = r;
    const double k = shift(rng);
    for (auto& row : shifted.scores) {
      for (std::size_t q = 1; q < row.size(); ++q) row[q] += k;
    }
    ScoreGrid permuted = r;
    for (auto& row : permuted.scores) std::reverse(row.begin(), row.end());
    std::reverse(permuted.questions.begin(), permuted.questions.end());
    const bool ok = std::abs(discrimination_loo(shifted, 0) - base) <= 1e-9 &&
                    std::abs(discrimination_loo(permuted, 4) - base) <= 1e-12;
    held += ok;
    o.check(ok, "shift or relabel changed discrimination");
  }
  o.summary = "hand grid max dev " + fmt("%.2g", worst) + ", invariance " + std::to_string(held) + "/100";
  return o;
}

// 7. Feedback policy over every state of the shipped bank.
Outcome feedback_policy() {
  Outcome o;
  const QuestionBank bank = QuestionBank::load(t::bank_dir());
  const JudgeHandle judge = JudgeHandle::stub();
  const FeedbackConstraints constraints;
  int states = 0;
  int leaks = 0;
  for (const auto& q : bank.questions()) {
    std::set<std::optional<std::string>> tags = {std::nullopt};
    for (const auto& fe : q.feedback_exemplars) tags.insert(fe.anticipated_error);
    for (int attempt = 1; attempt <= q.max_attempts; ++attempt) {
      for (bool correct : {false, true}) {
        for (const auto& tag : tags) {
          AttemptHistory history;
          for (int k = 1; k <= attempt; ++k) {
            const bool last = k == attempt;
            history.entries.push_back({k, "answer " + std::to_string(k),
                                       last && correct ? Correctness::kCorrect : Correctness::kIncorrect});
          }
          Verdict v;
          v.status = correct ? Correctness::kCorrect : Correctness::kIncorrect;
          v.pipeline = q.type;
          v.rationale.pipeline = q.type;
          v.rationale.error_tag = tag;
          const FeedbackResult r = generate_feedback(v, history, q, constraints, judge);
          ++states;
          const std::string where = q.question_id + " attempt " + std::to_string(attempt) +
                                    (correct ? " correct" : " incorrect") + (tag ? " " + *tag : "");
          if (!correct && attempt == 2) {
            o.check(r.text.rfind(kCorrectiveOpener, 0) == 0, where + ": missing corrective opener");
          }
          if (!correct && attempt == 3) {
            o.check(r.text.rfind(kFinalOpener, 0) == 0, where + ": missing final opener");
          }
          FeedbackConstraints merged = constraints;
          merged.forbidden_phrases.insert(merged.forbidden_phrases.end(), q.forbidden_phrases.begin(),
                                          q.forbidden_phrases.end());
          const auto violations = validate_feedback(r.text, r.directive, merged);
          for (const auto& viol : violations) {
            if (viol.kind == ViolationKind::kLeakage && attempt <= 2) ++leaks;
          }
          o.check(violations.empty() && r.advisory.empty(),
                  where + ": " + (violations.empty() ? "advisory on fallback" : violations[0].detail));
        }
      }
    }
  }
  o.check(leaks == 0, std::to_string(leaks) + " leakage violations on attempts 1-2");
  o.summary = std::to_string(states) + " states over " + std::to_string(bank.questions().size()) +
              " items, " + std::to_string(leaks) + " leaks";
  return o;
}

// 8. The fair-meeting-point transcript through the live service.
Outcome transcript_replay() {
  Outcome o;
  const auto dir = t::scratch_dir("transcript");
  auto store = std::make_shared<SubmissionStore>(dir / "log.ndjson");
  AssessmentService service(QuestionBank::load(t::bank_dir()), store, JudgeHandle::stub(), {});
  const std::vector<std::string> answers = {"Equal", "The length of the segment is equal.",
                                            "The distance from the circumcenter to each vertex is equal."};
  const std::vector<Correctness> verdicts = {Correctness::kIncorrect, Correctness::kIncorrect,
                                             Correctness::kCorrect};
  const std::vector<FeedbackStage> stages = {FeedbackStage::kHintStrategic, FeedbackStage::kCorrectiveSpecific,
                                             FeedbackStage::kPraise};
  const auto start = std::chrono::steady_clock::now();
  std::string seen;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const SubmissionResult r = service.handle_submission("S28", "Q6", answers[i]);
    seen += std::string(i ? ", " : "") + std::string(to_string(r.verdict.status)) + "/" +
            std::string(to_string(r.stage));
    o.check(r.verdict.status == verdicts[i] && r.stage == stages[i], "attempt " + std::to_string(i + 1));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 0.1, "runtime " + fmt("%.4f s", elapsed));
  std::filesystem::remove_all(dir);
  o.summary = seen + ", " + fmt("%.4f s", elapsed);
  return o;
}

std::vector<SubmissionRecord> fuzzed_log(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> students(1, 4);
  std::uniform_int_distribution<int> questions(1, 3);
  std::uniform_int_distribution<int> attempt(1, 6);
  std::uniform_int_distribution<int> size(0, 40);
  std::uniform_int_distribution<int> time(0, 50);
  std::bernoulli_distribution correct(0.3);
  std::vector<SubmissionRecord> out;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) {
    out.emplace_back("S" + std::to_string(students(rng)), "Q" + std::to_string(questions(rng)), attempt(rng),
                     correct(rng) ? Correctness::kCorrect : Correctness::kIncorrect, "a", "", time(rng));
  }
  return out;
}

// 9. Log cleaning.
Outcome cleaning() {
  Outcome o;
  auto rec = [](const char* s, const char* q, int k, Correctness c, std::int64_t at) {
    return SubmissionRecord(s, q, k, c, "a", "", at);
  };
  const auto I = Correctness::kIncorrect;
  const auto C = Correctness::kCorrect;
  const std::vector<std::pair<DropReason, std::vector<SubmissionRecord>>> hand = {
      {DropReason::kOverMax,
       {rec("S1", "Q1", 1, I, 1), rec("S1", "Q1", 2, I, 2), rec("S1", "Q1", 3, I, 3), rec("S1", "Q1", 4, I, 4),
        rec("S1", "Q1", 5, C, 5), rec("S1", "Q1", 6, C, 6)}},
      {DropReason::kAfterCorrect,
       {rec("S1", "Q1", 1, I, 1), rec("S1", "Q1", 2, C, 2), rec("S1", "Q1", 3, C, 3), rec("S1", "Q1", 4, I, 4)}},
      {DropReason::kDuplicateAttempt,
       {rec("S1", "Q1", 1, I, 1), rec("S1", "Q1", 1, I, 2), rec("S1", "Q1", 2, I, 3), rec("S1", "Q1", 2, C, 4),
        rec("S2", "Q1", 1, C, 1)}},
  };
  for (const auto& [reason, records] : hand) {
    const CleanLog log = clean(records, 4);
    o.check(log.provenance.at(reason) == 2 && log.dropped() == 2,
            std::string(to_string(reason)) + " provenance count");
    o.check(verify_clean_log(log.records, 4).empty(), std::string(to_string(reason)) + " result not clean");
  }
  std::mt19937_64 rng(99);
  int idempotent = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto raw = fuzzed_log(rng);
    const CleanLog once = clean(raw, 4);
    const CleanLog twice = clean(once.records, 4);
    const bool ok = twice.records == once.records && twice.dropped() == 0 &&
                    verify_clean_log(once.records, 4).empty() &&
                    once.records.size() + once.dropped() == raw.size();
    idempotent += ok;
    o.check(ok, "clean is not idempotent on fuzzed log " + std::to_string(i));
  }

  const auto dir = t::scratch_dir("service_log");
  auto store = std::make_shared<SubmissionStore>(dir / "log.ndjson");
  const QuestionBank bank = QuestionBank::load(t::bank_dir());
  AssessmentService service(bank, store, JudgeHandle::stub(), {});
  const auto ids = bank.presentation_order();
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  std::uniform_int_distribution<int> who(1, 6);
  int locked = 0;
  for (int i = 0; i < 400; ++i) {
    try {
      service.handle_submission("S" + std::to_string(who(rng)), ids[pick(rng)], "wrong answer");
    } catch (const ServiceError& e) {
      locked += e.code() == "ITEM_LOCKED";
    }
  }
  const auto written = load_log(dir / "log.ndjson");
  const CleanLog service_log = clean(written, 4);
  o.check(service_log.dropped() == 0, "service log needed cleaning");
  o.check(verify_clean_log(written, 4).empty(), "service log violates invariants");
  std::filesystem::remove_all(dir);
  o.summary = "3 anomaly classes, idempotent " + std::to_string(idempotent) + "/1000, service log " +
              std::to_string(written.size()) + " records (" + std::to_string(locked) +
              " locked rejections), 0 drops";
  return o;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string mutate(std::string s, std::mt19937_64& rng) {
  static const char* kTokens[] = {"1e999", "-0", "NaN", "null", "\"\"", "[]", "{}", "\"POINT\"", "\"SEGMENT\"",
                                  "\"CIRCLE\"", "\"A\"", "\"Z9\"", "1e-300", "\"refs\"", "\"params\"", "\"kind\"",
                                  "0", "2", ",", ":", "\"MEASURE_ANGLE\"", "\"POLYGON\"", "\"id\""};
  std::uniform_int_distribution<int> op(0, 5);
  std::uniform_int_distribution<int> count(1, 3);
  const int n = count(rng);
  for (int m = 0; m < n && !s.empty(); ++m) {
    std::uniform_int_distribution<std::size_t> at(0, s.size() - 1);
    const std::size_t i = at(rng);
    const std::size_t len = std::min<std::size_t>(s.size() - i, 1 + rng() % 12);
    switch (op(rng)) {
      case 0: s[i] = static_cast<char>(rng() % 256); break;
      case 1: s.erase(i, len); break;
      case 2: s.insert(i, s.substr(i, len)); break;
      case 3: s.replace(i, len, kTokens[rng() % std::size(kTokens)]); break;
      case 4: s.insert(i, kTokens[rng() % std::size(kTokens)]); break;
      case 5: std::swap(s[i], s[at(rng)]); break;
    }
  }
  return s;
}

// 10. Capsule parser robustness and round trips.
Outcome parser_robustness() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> seeds;
  int round_trips = 0;
  for (const auto& [id, pair] : t::bank_constructions()) {
    for (const ObjectCapsule* c : {&pair.correct, &pair.incorrect}) {
      const GeometrySession s = parse(*c);
      o.check(serialize(s).raw_text == c->raw_text, id + " capsule round trip");
      seeds.push_back(c->raw_text);
      ++round_trips;
    }
  }
  for (const auto& entry : std::filesystem::directory_iterator(t::data_dir() / "fixtures")) {
    const auto& p = entry.path();
    if (p.extension() == ".json" && p.filename().string().rfind("capsule_", 0) == 0) {
      const std::string text = read_file(p);
      o.check(serialize(parse({text})).raw_text + "\n" == text, p.filename().string() + " round trip");
      ++round_trips;
    } else if (p.extension() == ".ndjson") {
      std::istringstream in(read_file(p));
      std::string line;
      while (std::getline(in, line)) {
        o.check(SubmissionRecord::from_json_line(line).to_json_line() == line, p.filename().string() + " round trip");
        ++round_trips;
      }
    }
  }
  std::mt19937_64 rng(4242);
  constexpr int kInputs = 1'000'000;
  int accepted = 0;
  int rejected = 0;
  int untyped = 0;
  for (int i = 0; i < kInputs; ++i) {
    const std::string input = mutate(seeds[i % seeds.size()], rng);
    try {
      parse({input});
      ++accepted;
    } catch (const CapsuleError&) {
      ++rejected;
    } catch (...) {
      ++untyped;
    }
  }
  o.check(untyped == 0, std::to_string(untyped) + " inputs raised an untyped error");
  const double elapsed = seconds_since(start);
  o.check(elapsed < 30.0, "runtime " + fmt("%.1f s", elapsed));
  o.summary = std::to_string(round_trips) + " round trips, " + std::to_string(kInputs) + " fuzzed inputs (" +
              std::to_string(rejected) + " typed rejections, " + std::to_string(accepted) + " valid, " +
              std::to_string(untyped) + " untyped), " + fmt("%.1f s", elapsed);
  return o;
}

std::map<std::string, std::string> report_bytes(const std::vector<SubmissionRecord>& log,
                                                const std::filesystem::path& dir) {
  const PsychometricReport rep = build_report(log);
  std::map<std::string, std::string> out;
  for (auto fmt_kind : {ReportFormat::kCsv, ReportFormat::kSvgPlots}) {
    for (const auto& p : emit_report(rep, fmt_kind, dir)) out[p.filename().string()] = read_file(p);
  }
  return out;
}

// 11. Simulated cohort recovered by the analytics.
Outcome simulator_loop() {
  Outcome o;
  const CohortConfig config = load_cohort(t::data_dir() / "cohort.json");
  o.check(config.n_students == 5000 && config.questions.size() == 10, "cohort config shape");
  const auto log = simulate(config);
  const CleanLog cleaned = clean(log, config.max_attempts);
  o.check(cleaned.dropped() == 0, "simulated log needed cleaning");
  const LearningCurve curve = learning_curve(cleaned.records, 50);
  const double p1 = value(curve.aggregate[0]);
  o.check(std::abs(p1 - 0.6) <= 0.01, "attempt-1 success " + fmt("%.4f", p1));
  std::string steps;
  for (int k = 2; k <= kCurveAttempts; ++k) {
    // Conditional success among students still unsolved before attempt k.
    const double before = value(curve.aggregate[k - 2]);
    const double after = value(curve.aggregate[k - 1]);
    const double conditional = (after - before) / (1.0 - before);
    const double expected = 0.6 + 0.1 * (k - 1);
    steps += (k > 2 ? "/" : "") + fmt("%.3f", conditional);
    o.check(std::abs(conditional - expected) <= 0.02,
            "attempt " + std::to_string(k) + " conditional success " + fmt("%.4f", conditional));
  }
  const auto again = simulate(config);
  std::string a, b;
  for (const auto& r : log) a += r.to_json_line() + "\n";
  for (const auto& r : again) b += r.to_json_line() + "\n";
  o.check(a == b, "same seed produced different logs");
  const auto d1 = t::scratch_dir("sim_report_a");
  const auto d2 = t::scratch_dir("sim_report_b");
  const auto r1 = report_bytes(cleaned.records, d1);
  const auto r2 = report_bytes(clean(again, config.max_attempts).records, d2);
  o.check(!r1.empty() && r1 == r2, "same seed produced different reports");
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
  o.summary = std::to_string(log.size()) + " records, attempt-1 " + fmt("%.4f", p1) + ", conditional " + steps +
              ", " + std::to_string(r1.size()) + " report files byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometry oracles", geometry_oracles},
      {"item response replay", item_response_replay},
      {"conversion rates", conversion_rates},
      {"agreement and kappa", agreement},
      {"exact test oracles", exact_tests},
      {"discrimination oracle", discrimination},
      {"feedback policy", feedback_policy},
      {"transcript replay", transcript_replay},
      {"log cleaning", cleaning},
      {"parser robustness", parser_robustness},
      {"simulator loop", simulator_loop},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.summary.c_str());
    for (std::size_t j = 0; j < o.failures.size() && j < 5; ++j) std::printf("       %s\n", o.failures[j].c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
