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

#ifndef GEOGRADE_FEEDBACK_H_
#define GEOGRADE_FEEDBACK_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geograde/grading.h"
#include "geograde/judge.h"
#include "geograde/prompt.h"
#include "geograde/question.h"
#include "geograde/synonyms.h"

namespace geograde {

inline constexpr std::string_view kCorrectiveOpener =
    "Unfortunately, that wasn't correct, but don't give up yet!";
inline constexpr std::string_view kFinalOpener = "This is your final chance!";
inline constexpr std::string_view kRetryInvitation =
    "Would you like to try again by clicking the 'Retry' button?";
inline constexpr std::string_view kCollaborativeMessage =
    "Please help classmates who may be having difficulty.";

enum class FeedbackStage { kPraise, kHintStrategic, kCorrectiveSpecific, kFinalExplanatory };
std::string_view to_string(FeedbackStage s);

struct AttemptEntry {
  int attempt_no = 1;
  std::string answer_summary;
  Correctness verdict = Correctness::kIncorrect;
};

// Attempts for one (student, question) pair, oldest first.
struct AttemptHistory {
  std::vector<AttemptEntry> entries;

  // Throws Error("BAD_HISTORY") unless attempts run 1..n, n <= max_attempts
  // and nothing follows a CORRECT entry.
  void validate(int max_attempts) const;
};

struct FeedbackDirective {
  FeedbackStage stage = FeedbackStage::kPraise;
  int attempt_no = 1;
  std::optional<std::string> required_opener;
  bool allow_answer_disclosure = false;
  bool retry_invitation = false;
  // The attempt budget is spent; the item accepts no more submissions.
  bool item_locked = false;
  std::vector<FeedbackExemplar> selected_exemplars;
  std::optional<std::string> collaborative_message;
};

struct FeedbackConstraints {
  int max_chars = 100;
  int target_chars = 60;
  std::vector<std::string> forbidden_phrases;
  bool math_markup = true;
  // Pressure phrases rejected outside the final stage.
  std::vector<std::string> harsh_phrases = {"last chance", "this is your last chance"};
  // Difficulty index below which a correct answer also gets the
  // collaborative message. Unset disables it.
  std::optional<double> collaborative_cutoff;

  // Throws Error("CONFIG") on inconsistent limits.
  void validate() const;
};

enum class ViolationKind { kOverLength, kMissingOpener, kLeakage, kHarshTone, kRawMarkup };
std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

enum class FeedbackSource { kJudge, kJudgeReask, kExemplarFallback };
std::string_view to_string(FeedbackSource s);

struct FeedbackResult {
  std::string text;
  FeedbackSource source = FeedbackSource::kJudge;
  // Violations tolerated on the fallback path (teacher text is emitted as is).
  std::vector<Violation> advisory;
  FeedbackDirective directive;
};

// Throws Error("NO_EXEMPLAR") when the bank has nothing for the trigger and
// Error("BAD_HISTORY") for attempts beyond max_attempts.
FeedbackDirective plan_feedback(const Verdict& verdict, const AttemptHistory& history,
                                const QuestionSpec& question,
                                const FeedbackConstraints& constraints = {},
                                std::optional<double> difficulty = std::nullopt);

// Deterministic text built from the directive alone: opener, exemplar text,
// retry invitation and collaborative message, each only when required and
// not already present.
std::string template_text(const FeedbackDirective& directive);

PromptDocument assemble_feedback_prompt(const FeedbackDirective& directive,
                                        const AttemptHistory& history, const QuestionSpec& question,
                                        const FeedbackConstraints& constraints);

std::vector<Violation> validate_feedback(std::string_view text, const FeedbackDirective& directive,
                                         const FeedbackConstraints& constraints,
                                         const SynonymTable& synonyms = SynonymTable::defaults());

// Code points a reader sees: math delimiters and control words removed.
std::size_t displayed_length(std::string_view text);

FeedbackResult generate_feedback(const Verdict& verdict, const AttemptHistory& history,
                                 const QuestionSpec& question, const FeedbackConstraints& constraints,
                                 const JudgeHandle& judge,
                                 const SynonymTable& synonyms = SynonymTable::defaults(),
                                 std::optional<double> difficulty = std::nullopt);

}  // namespace geograde

#endif  // GEOGRADE_FEEDBACK_H_
