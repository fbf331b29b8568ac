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

#ifndef GEOGRADE_ANALYTICS_H_
#define GEOGRADE_ANALYTICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geograde/datastore.h"
#include "geograde/error.h"
#include "geograde/question.h"
#include "geograde/stats.h"

namespace geograde {

// A proportion that keeps its counts. A zero denominator is UNDEFINED.
struct Rate {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  bool defined() const { return denominator > 0; }
  std::optional<double> value() const;
  friend bool operator==(const Rate&, const Rate&) = default;
};

inline constexpr int kCurveAttempts = 4;

// ---- Agreement between the automated judgment and a teacher ----

struct JudgmentPair {
  std::string question_id;
  Correctness system = Correctness::kCorrect;
  Correctness teacher = Correctness::kCorrect;
};
using PairedJudgments = std::vector<JudgmentPair>;

// JSON array of {"question_id", "system", "teacher"}. Throws Error("JUDGMENTS").
PairedJudgments load_judgments(const std::filesystem::path& path);
PairedJudgments judgments_from_json(std::string_view text);

// Throws Error("EMPTY") when n = 0 and Error("BAD_VALUE") when agree > n.
Rate agreement_rate(std::int64_t agree, std::int64_t n);

struct KappaResult {
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e from the marginal products
  // Unset when p_e = 1 (both raters constant and equal).
  std::optional<double> kappa;
};

// Table cells: a = both CORRECT, b = system CORRECT only, c = teacher CORRECT
// only, d = both INCORRECT. Throws Error("EMPTY").
KappaResult cohens_kappa(const stats::Table2x2& t);
KappaResult cohens_kappa(const PairedJudgments& pairs);
stats::Table2x2 judgment_table(const PairedJudgments& pairs);

struct AgreementSplit {
  Rate system_correct;
  Rate system_incorrect;
};
// Throws Error("EMPTY").
AgreementSplit agreement_by_judgment(const PairedJudgments& pairs);

struct AgreementRow {
  std::string question_id;  // "ALL" for the pooled row
  Rate agreement;
  KappaResult kappa;
};
// One row per question in id order, then the pooled row.
std::vector<AgreementRow> agreement_table(const PairedJudgments& pairs);

// ---- Rubric scores ----

// Item -> scores in 1..5.
using RatingSet = std::map<std::string, std::vector<int>>;

// JSON object {"Q9": [5, 4, ...], ...}. Throws Error("RATINGS").
RatingSet load_ratings(const std::filesystem::path& path);
RatingSet ratings_from_json(std::string_view text);

struct RatingSummary {
  std::string item;  // "POOLED" for the pooled row
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
};
// Per item in id order, then the pooled row. Throws Error("EMPTY") or
// Error("BAD_VALUE") for a score outside 1..5.
std::vector<RatingSummary> summarize_ratings(const RatingSet& ratings);

// ---- Item statistics over a cleaned log ----

// Students who answered the question correctly at attempt 1 over students
// with any record for it. Throws Error("NO_ATTEMPTS").
Rate difficulty_index(const std::vector<SubmissionRecord>& log, const std::string& question_id);

// Student-by-question first-attempt scores; non-attempts are 0.
struct ScoreGrid {
  std::vector<std::string> students;
  std::vector<std::string> questions;
  std::vector<std::vector<double>> scores;  // [student][question]
};
// Students sorted by id; questions in the given order, or id order if empty.
ScoreGrid score_grid(const std::vector<SubmissionRecord>& log,
                     const std::vector<std::string>& questions = {});

// Pearson correlation between column q and the row totals of the other
// columns. Throws Error("ZERO_VARIANCE") or Error("BAD_VALUE").
double discrimination_loo(const ScoreGrid& grid, std::size_t question_index);
double discrimination_loo(const std::vector<SubmissionRecord>& log, const std::string& question_id);

struct QuestionCurve {
  std::string question_id;
  std::int64_t attempters = 0;
  // Pairs solved at or before attempt k, for k = 1..4.
  std::array<Rate, kCurveAttempts> solved_by;
};

struct LearningCurve {
  std::vector<QuestionCurve> per_question;
  std::array<Rate, kCurveAttempts> aggregate;
  std::vector<std::string> excluded;
};
// Questions attempted by fewer than min_students are excluded from every
// output. Throws Error("NO_QUESTIONS_RETAINED").
LearningCurve learning_curve(const std::vector<SubmissionRecord>& log, int min_students = 50);

enum class ConversionGrouping { kOverall, kPerStudent, kPerQuestion, kPerType };
std::string_view to_string(ConversionGrouping g);

// An INCORRECT attempt k counts when attempt k + 1 exists for the pair; it
// converts when that attempt is CORRECT. Rows are keyed by group ("ALL",
// student id, question id or type name) in key order. kPerType needs
// `types` to cover every question; otherwise Error("BAD_VALUE").
std::vector<std::pair<std::string, Rate>> conversion_rate(
    const std::vector<SubmissionRecord>& log, ConversionGrouping grouping,
    const std::map<std::string, AssessmentType>& types = {});

struct CarryoverResult {
  std::string target;
  // Rows: prior conversion, none. Columns: eventually correct, not.
  stats::Table2x2 eventual;
  stats::TestResult eventual_exact;
  stats::TestResult eventual_chi2;
  // Same rows; columns: correct at attempt 1, not.
  stats::Table2x2 first_attempt;
  stats::TestResult first_attempt_exact;
  // Attempt of first success among eventual solvers, prior versus none.
  // Unset when either group is empty.
  std::optional<stats::MannWhitneyResult> first_success;
};

// Prior conversion means an INCORRECT attempt followed directly by a CORRECT
// one on a question that precedes the target in `question_order`. Throws
// Error("BAD_VALUE") when the target is not in the order and
// Error("NO_ATTEMPTS") when nobody attempted it.
CarryoverResult carryover_contingency(const std::vector<SubmissionRecord>& log,
                                      const std::string& target,
                                      const std::vector<std::string>& question_order);

// ---- Full report ----

struct QuestionStats {
  std::string question_id;
  Rate difficulty;
  std::optional<double> discrimination;
  std::string discrimination_error;  // error code when discrimination is unset
};

struct ReportInputs {
  // Defaults to every question in the log, numeric id order.
  std::vector<std::string> question_order;
  std::map<std::string, AssessmentType> types;
  std::vector<std::string> carryover_targets;
  std::optional<PairedJudgments> judgments;
  std::optional<RatingSet> ratings;
  int min_students = 50;
};

struct PsychometricReport {
  std::vector<QuestionStats> questions;
  std::optional<LearningCurve> curve;
  std::map<ConversionGrouping, std::vector<std::pair<std::string, Rate>>> conversions;
  std::vector<CarryoverResult> carryover;
  std::optional<std::vector<AgreementRow>> agreement;
  std::optional<AgreementSplit> agreement_split;
  std::optional<std::vector<RatingSummary>> ratings;
  // "family: CODE: message" for every statistic family that failed.
  std::vector<std::string> errors;
};

PsychometricReport build_report(const std::vector<SubmissionRecord>& clean_log,
                                const ReportInputs& inputs = {});

}  // namespace geograde

#endif  // GEOGRADE_ANALYTICS_H_
