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

#include "geograde/feedback.h"

#include <algorithm>
#include <cctype>

namespace geograde {
namespace {

constexpr std::string_view kFeedbackExemplarSection = "feedback_exemplar";
constexpr std::string_view kAttemptSection = "attempt";
constexpr std::string_view kLatestAnswerSection = "latest_answer";
constexpr std::string_view kViolationsSection = "violations";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

FeedbackTrigger trigger_for(FeedbackStage stage) {
  switch (stage) {
    case FeedbackStage::kPraise: return FeedbackTrigger::kCorrect;
    case FeedbackStage::kHintStrategic: return FeedbackTrigger::kIncorrectAttempt1;
    case FeedbackStage::kCorrectiveSpecific: return FeedbackTrigger::kIncorrectAttempt2;
    case FeedbackStage::kFinalExplanatory: return FeedbackTrigger::kIncorrectAttempt3;
  }
  return FeedbackTrigger::kCorrect;
}

// Exemplar for the trigger: one written for the detected error first, then
// the generic one, then any.
const FeedbackExemplar* select_exemplar(const QuestionSpec& q, FeedbackTrigger trigger,
                                        const std::optional<std::string>& error_tag) {
  const FeedbackExemplar* generic = nullptr;
  const FeedbackExemplar* any = nullptr;
  for (const auto& fe : q.feedback_exemplars) {
    if (fe.trigger != trigger) continue;
    if (error_tag && fe.anticipated_error == error_tag) return &fe;
    if (!fe.anticipated_error && !generic) generic = &fe;
    if (!any) any = &fe;
  }
  return generic ? generic : any;
}

std::string stage_rules(const FeedbackDirective& d) {
  switch (d.stage) {
    case FeedbackStage::kPraise:
      return "The answer is correct. Acknowledge it warmly and restate the key idea in one "
             "complete sentence.";
    case FeedbackStage::kHintStrategic:
      return "The answer is incorrect and several attempts remain. Give a strategic hint that "
             "draws attention to a key aspect of the problem. Do not reveal the answer. End by "
             "inviting the student to retry.";
    case FeedbackStage::kCorrectiveSpecific:
      return "The answer is incorrect again. Point out the specific misconception in the "
             "student's answer and why it is wrong. Do not reveal the answer.";
    case FeedbackStage::kFinalExplanatory:
      return d.item_locked
                 ? "No attempts remain. Explain the correct answer and its reasoning."
                 : "One attempt remains. Explain the correct answer and its reasoning explicitly.";
  }
  return {};
}

}  // namespace

std::string_view to_string(FeedbackStage s) {
  switch (s) {
    case FeedbackStage::kPraise: return "PRAISE";
    case FeedbackStage::kHintStrategic: return "HINT_STRATEGIC";
    case FeedbackStage::kCorrectiveSpecific: return "CORRECTIVE_SPECIFIC";
    case FeedbackStage::kFinalExplanatory: return "FINAL_EXPLANATORY";
  }
  return "UNKNOWN";
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kOverLength: return "OVER_LENGTH";
    case ViolationKind::kMissingOpener: return "MISSING_OPENER";
    case ViolationKind::kLeakage: return "LEAKAGE";
    case ViolationKind::kHarshTone: return "HARSH_TONE";
    case ViolationKind::kRawMarkup: return "RAW_MARKUP";
  }
  return "UNKNOWN";
}

std::string_view to_string(FeedbackSource s) {
  switch (s) {
    case FeedbackSource::kJudge: return "JUDGE";
    case FeedbackSource::kJudgeReask: return "JUDGE_REASK";
    case FeedbackSource::kExemplarFallback: return "EXEMPLAR_FALLBACK";
  }
  return "UNKNOWN";
}

void AttemptHistory::validate(int max_attempts) const {
  if (entries.empty()) throw Error("BAD_HISTORY", "history is empty");
  if (static_cast<int>(entries.size()) > max_attempts) {
    throw Error("BAD_HISTORY", "more attempts than the question allows");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].attempt_no != static_cast<int>(i) + 1) {
      throw Error("BAD_HISTORY", "attempt numbers must run 1, 2, 3, ...");
    }
    if (entries[i].verdict == Correctness::kCorrect && i + 1 != entries.size()) {
      throw Error("BAD_HISTORY", "no attempt may follow a correct one");
    }
  }
}

void FeedbackConstraints::validate() const {
  if (max_chars < 1) throw Error("CONFIG", "max_chars must be positive");
  if (target_chars < 1 || target_chars > max_chars) {
    throw Error("CONFIG", "target_chars must lie in [1, max_chars]");
  }
}

FeedbackDirective plan_feedback(const Verdict& verdict, const AttemptHistory& history,
                                const QuestionSpec& question, const FeedbackConstraints& constraints,
                                std::optional<double> difficulty) {
  history.validate(question.max_attempts);
  if (history.entries.back().verdict != verdict.status) {
    throw Error("BAD_HISTORY", "verdict does not belong to the latest attempt");
  }
  FeedbackDirective d;
  d.attempt_no = history.entries.back().attempt_no;
  if (verdict.correct()) {
    d.stage = FeedbackStage::kPraise;
    d.allow_answer_disclosure = true;
    d.item_locked = true;
    if (constraints.collaborative_cutoff && difficulty && *difficulty < *constraints.collaborative_cutoff) {
      d.collaborative_message = std::string(kCollaborativeMessage);
    }
  } else {
    const int remaining = question.max_attempts - d.attempt_no;
    if (remaining >= 3) {
      d.stage = FeedbackStage::kHintStrategic;
      d.retry_invitation = true;
    } else if (remaining == 2) {
      d.stage = FeedbackStage::kCorrectiveSpecific;
      d.required_opener = std::string(kCorrectiveOpener);
    } else {
      d.stage = FeedbackStage::kFinalExplanatory;
      d.required_opener = std::string(kFinalOpener);
      d.allow_answer_disclosure = true;
      d.item_locked = remaining <= 0;
    }
  }
  const FeedbackTrigger trigger = trigger_for(d.stage);
  const FeedbackExemplar* ex = select_exemplar(question, trigger, verdict.rationale.error_tag);
  if (ex == nullptr) {
    throw Error("NO_EXEMPLAR", question.question_id + " has no feedback exemplar for " +
                                   std::string(to_string(trigger)));
  }
  d.selected_exemplars.push_back(*ex);
  return d;
}

std::string template_text(const FeedbackDirective& d) {
  const std::string& body = d.selected_exemplars.front().text;
  std::string out;
  if (d.required_opener && !starts_with(body, *d.required_opener)) out = *d.required_opener + " ";
  out += body;
  if (d.retry_invitation && body.find(kRetryInvitation) == std::string::npos) {
    out += " ";
    out += kRetryInvitation;
  }
  if (d.collaborative_message && body.find(*d.collaborative_message) == std::string::npos) {
    out += " " + *d.collaborative_message;
  }
  return out;
}

PromptDocument assemble_feedback_prompt(const FeedbackDirective& d, const AttemptHistory& history,
                                        const QuestionSpec& question,
                                        const FeedbackConstraints& constraints) {
  std::string rules = stage_rules(d) + "\n";
  if (d.required_opener) rules += "Begin the reply with exactly: " + *d.required_opener + "\n";
  if (d.retry_invitation) {
    rules += "End with an invitation such as: " + std::string(kRetryInvitation) + "\n";
  }
  rules += d.allow_answer_disclosure ? "You may state the correct answer.\n"
                                     : "Never state or strongly imply the correct answer.\n";
  rules += "Use at most " + std::to_string(constraints.max_chars) + " characters, ideally about " +
           std::to_string(constraints.target_chars) + ".\n";
  rules += "Be polite and encouraging; phrase requests softly, for example \"Could you "
           "please...\" or \"Please try to...\". Write complete sentences.\n";
  if (constraints.math_markup) rules += "Typeset any formula in LaTeX between $ delimiters.\n";
  rules += "Reply with only a JSON object of the form {\"feedback\": \"...\"}.";

  PromptDocument doc;
  doc.add(std::string(prompt_sections::kInstructions), rules,
          {{"stage", std::string(to_string(d.stage))},
           {"attempt", std::to_string(d.attempt_no)},
           {"disclosure", d.allow_answer_disclosure ? "true" : "false"},
           {"max_chars", std::to_string(constraints.max_chars)},
           {"target_chars", std::to_string(constraints.target_chars)}});
  for (const auto& ex : d.selected_exemplars) {
    std::vector<std::pair<std::string, std::string>> attrs = {
        {"trigger", std::string(to_string(ex.trigger))}};
    if (ex.anticipated_error) attrs.emplace_back("anticipated_error", *ex.anticipated_error);
    doc.add(std::string(kFeedbackExemplarSection), ex.text, std::move(attrs));
  }
  doc.add(std::string(prompt_sections::kProblem), question.prompt);
  for (const auto& e : history.entries) {
    doc.add(std::string(kAttemptSection), e.answer_summary,
            {{"number", std::to_string(e.attempt_no)}, {"verdict", std::string(to_string(e.verdict))}});
  }
  doc.add(std::string(kLatestAnswerSection),
          history.entries.empty() ? std::string() : history.entries.back().answer_summary);
  doc.add(std::string(prompt_sections::kTemplate), template_text(d));
  return doc;
}

std::size_t displayed_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\\' && i + 1 < text.size()) {
      const char next = text[i + 1];
      if (next == '(' || next == ')' || next == '[' || next == ']') {
        ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(next))) {
        while (i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]))) ++i;
        continue;
      }
    }
    if (c == '$' || c == '{' || c == '}') continue;
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

namespace {

std::optional<std::string> markup_problem(std::string_view text) {
  int dollars = 0;
  int paren = 0;
  int bracket = 0;
  int brace = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      const char next = text[++i];
      if (next == '(') ++paren;
      if (next == ')' && --paren < 0) return "unmatched \\)";
      if (next == '[') ++bracket;
      if (next == ']' && --bracket < 0) return "unmatched \\]";
      continue;
    }
    if (c == '$') ++dollars;
    if (c == '{') ++brace;
    if (c == '}' && --brace < 0) return "unmatched }";
  }
  if (dollars % 2) return "unbalanced $";
  if (paren) return "unclosed \\(";
  if (bracket) return "unclosed \\[";
  if (brace) return "unclosed {";
  return std::nullopt;
}

}  // namespace

std::vector<Violation> validate_feedback(std::string_view text, const FeedbackDirective& d,
                                         const FeedbackConstraints& constraints,
                                         const SynonymTable& synonyms) {
  std::vector<Violation> out;
  const std::size_t len = displayed_length(text);
  if (len > static_cast<std::size_t>(constraints.max_chars)) {
    out.push_back({ViolationKind::kOverLength, std::to_string(len) + " characters exceeds " +
                                                   std::to_string(constraints.max_chars)});
  }
  if (d.required_opener && !starts_with(text, *d.required_opener)) {
    out.push_back({ViolationKind::kMissingOpener, "must begin with \"" + *d.required_opener + "\""});
  }
  if (!d.allow_answer_disclosure) {
    for (const auto& phrase : constraints.forbidden_phrases) {
      if (synonyms.contains_phrase(text, phrase)) {
        out.push_back({ViolationKind::kLeakage, "reveals \"" + phrase + "\""});
      }
    }
  }
  if (d.stage != FeedbackStage::kFinalExplanatory) {
    const std::string lowered = lower(text);
    for (const auto& phrase : constraints.harsh_phrases) {
      if (lowered.find(lower(phrase)) != std::string::npos) {
        out.push_back({ViolationKind::kHarshTone, "contains \"" + phrase + "\""});
        break;
      }
    }
  }
  if (auto problem = markup_problem(text)) out.push_back({ViolationKind::kRawMarkup, *problem});
  return out;
}

FeedbackResult generate_feedback(const Verdict& verdict, const AttemptHistory& history,
                                 const QuestionSpec& question, const FeedbackConstraints& base,
                                 const JudgeHandle& judge, const SynonymTable& synonyms,
                                 std::optional<double> difficulty) {
  FeedbackConstraints constraints = base;
  constraints.forbidden_phrases.insert(constraints.forbidden_phrases.end(),
                                       question.forbidden_phrases.begin(),
                                       question.forbidden_phrases.end());
  FeedbackResult result;
  result.directive = plan_feedback(verdict, history, question, constraints, difficulty);
  PromptDocument prompt = assemble_feedback_prompt(result.directive, history, question, constraints);

  auto describe = [](const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) s += std::string(to_string(v.kind)) + ": " + v.detail + "\n";
    return s;
  };

  try {
    std::string text = judge.generate_feedback_text(prompt);
    auto violations = validate_feedback(text, result.directive, constraints, synonyms);
    if (violations.empty()) {
      result.text = std::move(text);
      result.source = FeedbackSource::kJudge;
      return result;
    }
    prompt.add(std::string(kViolationsSection),
               "Your previous feedback broke these rules; rewrite it:\n" + describe(violations));
    text = judge.generate_feedback_text(prompt);
    if (validate_feedback(text, result.directive, constraints, synonyms).empty()) {
      result.text = std::move(text);
      result.source = FeedbackSource::kJudgeReask;
      return result;
    }
  } catch (const JudgeError&) {
    // Teacher text below is always available once planning succeeded.
  }
  result.text = template_text(result.directive);
  result.source = FeedbackSource::kExemplarFallback;
  result.advisory = validate_feedback(result.text, result.directive, constraints, synonyms);
  return result;
}

}  // namespace geograde
