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

#ifndef GEOGRADE_QUESTION_H_
#define GEOGRADE_QUESTION_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geograde/capsule.h"
#include "geograde/geometry.h"

namespace geograde {

enum class AssessmentType { kClosed, kCgt, kOpen };

std::string_view to_string(AssessmentType t);
// Throws Error("BANK") on an unknown name.
AssessmentType assessment_type_from_string(std::string_view s);

enum class RuleKind {
  kObjectExists,
  kPointEquidistant,
  kPointAt,
  kAngleInRange,
  kAngleIsInterior,
  kLengthEquals,
  kPointOnLine,
  kPolygonVertexCount,
};

std::string_view to_string(RuleKind k);
RuleKind rule_kind_from_string(std::string_view s);

// Picks session objects by label-or-id, by kind, or both.
struct ObjectSelector {
  std::optional<std::string> name;
  std::optional<ObjectKind> kind;

  bool matches(const SessionObject& obj) const;
  std::string describe() const;
};

// Where POINT_AT expects its target: fixed coordinates, or a center derived
// from other points in the session.
struct PointAnchor {
  enum class Kind { kCoordinates, kCircumcenter, kIncenter, kMidpoint, kCentroid };
  Kind kind = Kind::kCoordinates;
  double x = 0.0;
  double y = 0.0;
  std::vector<ObjectSelector> points;
};

// One declarative check over a parsed construction. Which fields are used
// depends on `kind`:
//   OBJECT_EXISTS         target, min_count
//   POINT_EQUIDISTANT     target (candidate points), references (>= 2 points)
//   POINT_AT              target, at
//   ANGLE_IN_RANGE        target (angles), range_min < degrees < range_max, vertex?
//   ANGLE_IS_INTERIOR     target (angles), vertex?
//   LENGTH_EQUALS         target (measurable), value or equals
//   POINT_ON_LINE         target (points), line
//   POLYGON_VERTEX_COUNT  target (polygons), count
struct CgtRule {
  RuleKind kind = RuleKind::kObjectExists;
  ObjectSelector target;
  std::vector<ObjectSelector> references;
  int min_count = 1;
  std::optional<int> count;
  std::optional<double> range_min;
  std::optional<double> range_max;
  std::optional<ObjectSelector> vertex;
  std::optional<double> value;
  std::optional<ObjectSelector> equals;
  std::optional<PointAnchor> at;
  std::optional<ObjectSelector> line;
  // Reported in the verdict when this rule fails; feedback uses it to pick
  // an exemplar written for that mistake.
  std::optional<std::string> error_tag;

  // Throws Error("BANK") when required fields for the kind are missing.
  void validate() const;
};

struct ExemplarAnswer {
  std::string text;
  std::set<std::string> concept_tags;
};

enum class FeedbackTrigger { kCorrect, kIncorrectAttempt1, kIncorrectAttempt2, kIncorrectAttempt3 };

std::string_view to_string(FeedbackTrigger t);
FeedbackTrigger feedback_trigger_from_string(std::string_view s);

struct FeedbackExemplar {
  FeedbackTrigger trigger = FeedbackTrigger::kCorrect;
  std::optional<std::string> anticipated_error;
  std::string text;
};

struct QuestionSpec {
  std::string question_id;
  int stage = 0;
  AssessmentType type = AssessmentType::kClosed;
  std::string prompt;
  int max_attempts = 4;
  // Stored normalized (see normalize_closed_answer).
  std::optional<std::set<std::string>> closed_key;
  std::optional<std::vector<CgtRule>> rule_program;
  std::optional<std::vector<ExemplarAnswer>> exemplars;
  std::vector<FeedbackExemplar> feedback_exemplars;
  // Answer-revealing phrases that feedback may not contain before the final
  // stage.
  std::vector<std::string> forbidden_phrases;
  std::optional<geometry::Tolerances> tolerances;

  geometry::Tolerances effective_tolerances() const { return tolerances.value_or(geometry::Tolerances{}); }
  // Throws Error("BANK") on any invariant violation.
  void validate() const;
};

class QuestionBank {
 public:
  QuestionBank() = default;
  explicit QuestionBank(std::vector<QuestionSpec> questions);

  // A directory of *.json stage files (loaded in name order) or one file.
  static QuestionBank load(const std::filesystem::path& path);
  static QuestionBank from_json(std::string_view text);

  const std::vector<QuestionSpec>& questions() const noexcept { return questions_; }
  const QuestionSpec* find(std::string_view question_id) const;
  const QuestionSpec& at(std::string_view question_id) const;

  // Question ids in presentation order (Q1, Q2, ..., natural numeric order).
  std::vector<std::string> presentation_order() const;
  std::map<std::string, AssessmentType> type_map() const;

  void add(QuestionSpec q);

 private:
  std::vector<QuestionSpec> questions_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

QuestionSpec question_from_json(std::string_view text);

// Orders "Q2" before "Q10"; non-numeric suffixes fall back to text order.
bool question_id_less(std::string_view a, std::string_view b);

}  // namespace geograde

#endif  // GEOGRADE_QUESTION_H_
