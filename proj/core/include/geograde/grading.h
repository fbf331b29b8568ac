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

#ifndef GEOGRADE_GRADING_H_
#define GEOGRADE_GRADING_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geograde/capsule.h"
#include "geograde/error.h"
#include "geograde/judge.h"
#include "geograde/prompt.h"
#include "geograde/question.h"

namespace geograde {

struct ClosedText {
  std::string text;
};
struct OpenText {
  std::string text;
};
using AnswerPayload = std::variant<ClosedText, ObjectCapsule, OpenText>;

AssessmentType payload_type(const AnswerPayload& payload);
// The stored text form of a payload (the answer column of the log).
const std::string& payload_text(const AnswerPayload& payload);
AnswerPayload make_payload(AssessmentType type, std::string text);

enum class RationaleKind {
  kKeyMatch,
  kNoKeyMatch,
  kAllRulesPassed,
  kRuleFailed,
  kCapsuleInvalid,
  kJudge,
};
std::string_view to_string(RationaleKind k);

struct RuleOutcome {
  std::size_t index = 0;
  RuleKind kind = RuleKind::kObjectExists;
  bool passed = false;
  // The quantity compared against the rule's target, when one exists.
  std::optional<double> measured;
  std::string detail;
  std::optional<std::string> error_tag;

  friend bool operator==(const RuleOutcome&, const RuleOutcome&) = default;
};

struct Rationale {
  AssessmentType pipeline = AssessmentType::kClosed;
  RationaleKind kind = RationaleKind::kNoKeyMatch;
  std::optional<std::string> matched_key;
  std::vector<RuleOutcome> rule_outcomes;
  std::optional<std::size_t> first_failure;
  // Tag of the first failing rule, used to select targeted feedback.
  std::optional<std::string> error_tag;
  std::string detail;
  std::optional<std::string> judge_output;

  friend bool operator==(const Rationale&, const Rationale&) = default;
};

struct Verdict {
  Correctness status = Correctness::kIncorrect;
  AssessmentType pipeline = AssessmentType::kClosed;
  Rationale rationale;

  bool correct() const noexcept { return status == Correctness::kCorrect; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Raised by the open pipeline when the judge gave up; never graded silently.
class JudgeUnavailable : public Error {
 public:
  JudgeUnavailable(JudgeErrc cause, int attempts, const std::string& message);
  JudgeErrc cause() const noexcept { return cause_; }
  int attempts() const noexcept { return attempts_; }

 private:
  JudgeErrc cause_;
  int attempts_;
};

// Trim, lowercase, collapse whitespace, drop trailing punctuation, and
// rewrite decimal numerals canonically ("90." and "090.0" become "90").
std::string normalize_closed_answer(std::string_view answer);

Verdict grade_closed(std::string_view answer, const std::set<std::string>& key);

// A capsule that fails to parse grades INCORRECT (CAPSULE_INVALID).
Verdict grade_cgt(const ObjectCapsule& capsule, const std::vector<CgtRule>& program,
                  const geometry::Tolerances& tol = {});
Verdict grade_cgt(const GeometrySession& session, const std::vector<CgtRule>& program,
                  const geometry::Tolerances& tol = {});

// The answer is trimmed before it is shown to the judge. Throws
// JudgeUnavailable when the judge fails.
Verdict grade_open(std::string_view answer, const QuestionSpec& question, const JudgeHandle& judge);

PromptDocument assemble_grading_prompt(const QuestionSpec& question, std::string_view answer);

// Throws Error("PAYLOAD_MISMATCH") when the payload does not fit the
// question type, and JudgeUnavailable for OPEN questions without a judge.
Verdict grade(const QuestionSpec& question, const AnswerPayload& payload,
              const JudgeHandle* judge);
inline Verdict grade(const QuestionSpec& question, const AnswerPayload& payload,
                     const JudgeHandle& judge) {
  return grade(question, payload, &judge);
}

}  // namespace geograde

#endif  // GEOGRADE_GRADING_H_
