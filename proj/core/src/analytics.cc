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

#include "geograde/analytics.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.h"

namespace geograde {
namespace {

using PairKey = std::pair<std::string, std::string>;

// Records per (student, question), ordered by attempt number.
std::map<PairKey, std::vector<const SubmissionRecord*>> by_pair(
    const std::vector<SubmissionRecord>& log) {
  std::map<PairKey, std::vector<const SubmissionRecord*>> out;
  for (const auto& r : log) out[{r.student_id(), r.question_id()}].push_back(&r);
  for (auto& [key, rs] : out) {
    std::stable_sort(rs.begin(), rs.end(),
                     [](const auto* a, const auto* b) { return a->attempts() < b->attempts(); });
  }
  return out;
}

// Attempt number of the first CORRECT record, if any.
std::optional<int> first_success(const std::vector<const SubmissionRecord*>& rs) {
  for (const auto* r : rs) {
    if (r->correct()) return r->attempts();
  }
  return std::nullopt;
}

// True when some INCORRECT attempt k is followed by a CORRECT attempt k + 1.
bool has_conversion(const std::vector<const SubmissionRecord*>& rs) {
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    if (!rs[i]->correct() && rs[i + 1]->attempts() == rs[i]->attempts() + 1 &&
        rs[i + 1]->correct()) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> ordered_questions(const std::vector<SubmissionRecord>& log) {
  std::set<std::string> ids;
  for (const auto& r : log) ids.insert(r.question_id());
  std::vector<std::string> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end(), question_id_less);
  return out;
}

Correctness parse_label(const detail::Json& j, const char* key) {
  try {
    return correctness_from_string(detail::require_string(j, key, "JUDGMENTS"));
  } catch (const Error& e) {
    throw Error("JUDGMENTS", e.what());
  }
}

}  // namespace

std::optional<double> Rate::value() const {
  if (!defined()) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

PairedJudgments judgments_from_json(std::string_view text) {
  const detail::Json j = detail::parse_json(text, "JUDGMENTS");
  if (!j.is_array()) throw Error("JUDGMENTS", "expected an array of judgment pairs");
  PairedJudgments out;
  for (const auto& item : j) {
    if (!item.is_object()) throw Error("JUDGMENTS", "judgment pair must be an object");
    out.push_back({detail::require_string(item, "question_id", "JUDGMENTS"),
                   parse_label(item, "system"), parse_label(item, "teacher")});
  }
  return out;
}

PairedJudgments load_judgments(const std::filesystem::path& path) {
  return judgments_from_json(detail::read_file(path));
}

Rate agreement_rate(std::int64_t agree, std::int64_t n) {
  if (n <= 0) throw Error("EMPTY", "agreement over no judgments");
  if (agree < 0 || agree > n) throw Error("BAD_VALUE", "agreement count outside [0, n]");
  return {agree, n};
}

stats::Table2x2 judgment_table(const PairedJudgments& pairs) {
  stats::Table2x2 t;
  for (const auto& p : pairs) {
    const bool s = p.system == Correctness::kCorrect;
    const bool h = p.teacher == Correctness::kCorrect;
    if (s && h) {
      ++t.a;
    } else if (s) {
      ++t.b;
    } else if (h) {
      ++t.c;
    } else {
      ++t.d;
    }
  }
  return t;
}

KappaResult cohens_kappa(const stats::Table2x2& t) {
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0) throw Error("BAD_VALUE", "negative cell count");
  const double n = static_cast<double>(t.n());
  if (n == 0) throw Error("EMPTY", "kappa over no judgments");
  KappaResult out;
  out.observed = static_cast<double>(t.a + t.d) / n;
  const double sys_yes = static_cast<double>(t.a + t.b) / n;
  const double teach_yes = static_cast<double>(t.a + t.c) / n;
  out.expected = sys_yes * teach_yes + (1.0 - sys_yes) * (1.0 - teach_yes);
  if (out.expected < 1.0) out.kappa = (out.observed - out.expected) / (1.0 - out.expected);
  return out;
}

KappaResult cohens_kappa(const PairedJudgments& pairs) { return cohens_kappa(judgment_table(pairs)); }

AgreementSplit agreement_by_judgment(const PairedJudgments& pairs) {
  if (pairs.empty()) throw Error("EMPTY", "agreement over no judgments");
  const stats::Table2x2 t = judgment_table(pairs);
  return {{t.a, t.a + t.b}, {t.d, t.c + t.d}};
}

std::vector<AgreementRow> agreement_table(const PairedJudgments& pairs) {
  if (pairs.empty()) throw Error("EMPTY", "agreement over no judgments");
  std::map<std::string, PairedJudgments> per_question;
  for (const auto& p : pairs) per_question[p.question_id].push_back(p);
  std::vector<std::string> ids;
  for (const auto& [id, ps] : per_question) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), question_id_less);
  std::vector<AgreementRow> out;
  auto row = [](std::string id, const PairedJudgments& ps) {
    const stats::Table2x2 t = judgment_table(ps);
    return AgreementRow{std::move(id), agreement_rate(t.a + t.d, t.n()), cohens_kappa(t)};
  };
  for (const auto& id : ids) out.push_back(row(id, per_question[id]));
  out.push_back(row("ALL", pairs));
  return out;
}

RatingSet ratings_from_json(std::string_view text) {
  const detail::Json j = detail::parse_json(text, "RATINGS");
  if (!j.is_object()) throw Error("RATINGS", "expected an object of item score lists");
  RatingSet out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_array()) throw Error("RATINGS", it.key() + ": expected a list of scores");
    auto& scores = out[it.key()];
    for (const auto& s : it.value()) {
      if (!s.is_number_integer()) throw Error("RATINGS", it.key() + ": scores must be integers");
      scores.push_back(s.get<int>());
    }
  }
  return out;
}

RatingSet load_ratings(const std::filesystem::path& path) {
  return ratings_from_json(detail::read_file(path));
}

std::vector<RatingSummary> summarize_ratings(const RatingSet& ratings) {
  std::vector<std::string> items;
  std::vector<double> pooled;
  for (const auto& [item, scores] : ratings) {
    for (int s : scores) {
      if (s < 1 || s > 5) throw Error("BAD_VALUE", item + ": score " + std::to_string(s) + " outside 1..5");
      pooled.push_back(s);
    }
    if (!scores.empty()) items.push_back(item);
  }
  if (pooled.empty()) throw Error("EMPTY", "no ratings");
  std::sort(items.begin(), items.end(), question_id_less);
  std::vector<RatingSummary> out;
  for (const auto& item : items) {
    const auto& scores = ratings.at(item);
    const std::vector<double> xs(scores.begin(), scores.end());
    out.push_back({item, xs.size(), stats::mean(xs), stats::sample_sd(xs)});
  }
  out.push_back({"POOLED", pooled.size(), stats::mean(pooled), stats::sample_sd(pooled)});
  return out;
}

Rate difficulty_index(const std::vector<SubmissionRecord>& log, const std::string& question_id) {
  std::set<std::string> attempted;
  std::set<std::string> first_correct;
  for (const auto& r : log) {
    if (r.question_id() != question_id) continue;
    attempted.insert(r.student_id());
    if (r.attempts() == 1 && r.correct()) first_correct.insert(r.student_id());
  }
  if (attempted.empty()) throw Error("NO_ATTEMPTS", "nobody attempted " + question_id);
  return {static_cast<std::int64_t>(first_correct.size()),
          static_cast<std::int64_t>(attempted.size())};
}

ScoreGrid score_grid(const std::vector<SubmissionRecord>& log,
                     const std::vector<std::string>& questions) {
  ScoreGrid g;
  g.questions = questions.empty() ? ordered_questions(log) : questions;
  std::set<std::string> students;
  for (const auto& r : log) students.insert(r.student_id());
  g.students.assign(students.begin(), students.end());
  std::map<std::string, std::size_t> s_index;
  std::map<std::string, std::size_t> q_index;
  for (std::size_t i = 0; i < g.students.size(); ++i) s_index[g.students[i]] = i;
  for (std::size_t i = 0; i < g.questions.size(); ++i) q_index[g.questions[i]] = i;
  g.scores.assign(g.students.size(), std::vector<double>(g.questions.size(), 0.0));
  for (const auto& r : log) {
    auto q = q_index.find(r.question_id());
    if (q == q_index.end() || r.attempts() != 1 || !r.correct()) continue;
    g.scores[s_index[r.student_id()]][q->second] = 1.0;
  }
  return g;
}

double discrimination_loo(const ScoreGrid& grid, std::size_t question_index) {
  if (grid.scores.size() < 2) throw Error("BAD_VALUE", "discrimination needs at least two students");
  if (question_index >= grid.questions.size()) throw Error("BAD_VALUE", "question index out of range");
  std::vector<double> item;
  std::vector<double> rest;
  for (const auto& row : grid.scores) {
    if (row.size() != grid.questions.size()) throw Error("BAD_VALUE", "ragged score grid");
    double total = 0.0;
    for (std::size_t q = 0; q < row.size(); ++q) {
      if (q != question_index) total += row[q];
    }
    item.push_back(row[question_index]);
    rest.push_back(total);
  }
  return stats::pearson(item, rest);
}

double discrimination_loo(const std::vector<SubmissionRecord>& log, const std::string& question_id) {
  const ScoreGrid g = score_grid(log);
  const auto it = std::find(g.questions.begin(), g.questions.end(), question_id);
  if (it == g.questions.end()) throw Error("NO_ATTEMPTS", "nobody attempted " + question_id);
  return discrimination_loo(g, static_cast<std::size_t>(it - g.questions.begin()));
}

LearningCurve learning_curve(const std::vector<SubmissionRecord>& log, int min_students) {
  std::map<std::string, std::vector<std::optional<int>>> per_question;
  for (const auto& [key, rs] : by_pair(log)) per_question[key.second].push_back(first_success(rs));
  std::vector<std::string> ids;
  for (const auto& [id, v] : per_question) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), question_id_less);

  LearningCurve out;
  for (auto& r : out.aggregate) r = {};
  for (const auto& id : ids) {
    const auto& successes = per_question[id];
    const auto n = static_cast<std::int64_t>(successes.size());
    if (n < min_students) {
      out.excluded.push_back(id);
      continue;
    }
    QuestionCurve qc;
    qc.question_id = id;
    qc.attempters = n;
    for (int k = 1; k <= kCurveAttempts; ++k) {
      const auto solved = std::count_if(successes.begin(), successes.end(),
                                        [k](const auto& s) { return s && *s <= k; });
      qc.solved_by[k - 1] = {solved, n};
      out.aggregate[k - 1].numerator += solved;
      out.aggregate[k - 1].denominator += n;
    }
    out.per_question.push_back(std::move(qc));
  }
  if (out.per_question.empty()) {
    throw Error("NO_QUESTIONS_RETAINED",
                "no question has at least " + std::to_string(min_students) + " attempters");
  }
  return out;
}

std::string_view to_string(ConversionGrouping g) {
  switch (g) {
    case ConversionGrouping::kOverall: return "overall";
    case ConversionGrouping::kPerStudent: return "per_student";
    case ConversionGrouping::kPerQuestion: return "per_question";
    case ConversionGrouping::kPerType: return "per_type";
  }
  return "unknown";
}

std::vector<std::pair<std::string, Rate>> conversion_rate(
    const std::vector<SubmissionRecord>& log, ConversionGrouping grouping,
    const std::map<std::string, AssessmentType>& types) {
  std::map<std::string, Rate> groups;
  if (grouping == ConversionGrouping::kOverall) groups["ALL"] = {};
  for (const auto& [key, rs] : by_pair(log)) {
    std::string group;
    switch (grouping) {
      case ConversionGrouping::kOverall: group = "ALL"; break;
      case ConversionGrouping::kPerStudent: group = key.first; break;
      case ConversionGrouping::kPerQuestion: group = key.second; break;
      case ConversionGrouping::kPerType: {
        const auto it = types.find(key.second);
        if (it == types.end()) throw Error("BAD_VALUE", "no assessment type for " + key.second);
        group = std::string(to_string(it->second));
        break;
      }
    }
    Rate& rate = groups[group];
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
      if (rs[i]->correct() || rs[i + 1]->attempts() != rs[i]->attempts() + 1) continue;
      ++rate.denominator;
      if (rs[i + 1]->correct()) ++rate.numerator;
    }
  }
  std::vector<std::pair<std::string, Rate>> out(groups.begin(), groups.end());
  if (grouping == ConversionGrouping::kPerQuestion) {
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return question_id_less(a.first, b.first); });
  }
  return out;
}

CarryoverResult carryover_contingency(const std::vector<SubmissionRecord>& log,
                                      const std::string& target,
                                      const std::vector<std::string>& question_order) {
  const auto target_it = std::find(question_order.begin(), question_order.end(), target);
  if (target_it == question_order.end()) throw Error("BAD_VALUE", target + " is not in the question order");
  const std::set<std::string> earlier(question_order.begin(), target_it);

  std::set<std::string> converted_before;
  std::map<std::string, std::vector<const SubmissionRecord*>> on_target;
  for (const auto& [key, rs] : by_pair(log)) {
    if (key.second == target) {
      on_target[key.first] = rs;
    } else if (earlier.count(key.second) && has_conversion(rs)) {
      converted_before.insert(key.first);
    }
  }
  if (on_target.empty()) throw Error("NO_ATTEMPTS", "nobody attempted " + target);

  CarryoverResult out;
  out.target = target;
  std::vector<double> prior_success;
  std::vector<double> none_success;
  for (const auto& [student, rs] : on_target) {
    const bool prior = converted_before.count(student) > 0;
    const std::optional<int> success = first_success(rs);
    const bool first = success && *success == 1;
    auto& e = out.eventual;
    auto& f = out.first_attempt;
    if (prior) {
      (success ? e.a : e.b)++;
      (first ? f.a : f.b)++;
      if (success) prior_success.push_back(*success);
    } else {
      (success ? e.c : e.d)++;
      (first ? f.c : f.d)++;
      if (success) none_success.push_back(*success);
    }
  }
  out.eventual_exact = stats::fisher_exact(out.eventual);
  out.eventual_chi2 = stats::chi_square_yates(out.eventual);
  out.first_attempt_exact = stats::fisher_exact(out.first_attempt);
  if (!prior_success.empty() && !none_success.empty()) {
    out.first_success = stats::mann_whitney_u(prior_success, none_success);
  }
  return out;
}

PsychometricReport build_report(const std::vector<SubmissionRecord>& clean_log,
                                const ReportInputs& inputs) {
  PsychometricReport rep;
  const std::vector<std::string> order =
      inputs.question_order.empty() ? ordered_questions(clean_log) : inputs.question_order;
  auto guard = [&rep](const char* family, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      rep.errors.push_back(std::string(family) + ": " + e.what());
    }
  };

  const ScoreGrid grid = score_grid(clean_log, order);
  for (std::size_t q = 0; q < order.size(); ++q) {
    QuestionStats s;
    s.question_id = order[q];
    guard("difficulty", [&] { s.difficulty = difficulty_index(clean_log, order[q]); });
    try {
      s.discrimination = discrimination_loo(grid, q);
    } catch (const Error& e) {
      s.discrimination_error = e.code();
    }
    rep.questions.push_back(std::move(s));
  }
  guard("learning_curve", [&] { rep.curve = learning_curve(clean_log, inputs.min_students); });
  for (auto g : {ConversionGrouping::kOverall, ConversionGrouping::kPerStudent,
                 ConversionGrouping::kPerQuestion}) {
    rep.conversions[g] = conversion_rate(clean_log, g);
  }
  if (!inputs.types.empty()) {
    guard("conversion", [&] {
      rep.conversions[ConversionGrouping::kPerType] =
          conversion_rate(clean_log, ConversionGrouping::kPerType, inputs.types);
    });
  }
  for (const auto& target : inputs.carryover_targets) {
    guard("carryover", [&] { rep.carryover.push_back(carryover_contingency(clean_log, target, order)); });
  }
  if (inputs.judgments) {
    guard("agreement", [&] {
      rep.agreement = agreement_table(*inputs.judgments);
      rep.agreement_split = agreement_by_judgment(*inputs.judgments);
    });
  }
  if (inputs.ratings) guard("ratings", [&] { rep.ratings = summarize_ratings(*inputs.ratings); });
  return rep;
}

}  // namespace geograde
