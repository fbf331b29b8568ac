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

#include "geograde/grading.h"

#include <algorithm>
#include <cctype>

#include "cgt_rules.h"

namespace geograde {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

// Canonical spelling of a decimal numeral token, or the token unchanged.
std::string canonical_numeral(const std::string& tok) {
  std::size_t i = 0;
  bool negative = false;
  if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) {
    negative = tok[i] == '-';
    ++i;
  }
  std::string int_part;
  std::string frac_part;
  bool dot = false;
  bool any_digit = false;
  for (; i < tok.size(); ++i) {
    const char c = tok[i];
    if (is_digit(c)) {
      (dot ? frac_part : int_part) += c;
      any_digit = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      return tok;
    }
  }
  if (!any_digit) return tok;
  int_part.erase(0, std::min(int_part.find_first_not_of('0'), int_part.size()));
  if (int_part.empty()) int_part = "0";
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  std::string out = int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  if (negative && out != "0") out = "-" + out;
  return out;
}

Verdict closed_verdict(bool correct, Rationale r) {
  Verdict v;
  v.status = correct ? Correctness::kCorrect : Correctness::kIncorrect;
  v.pipeline = AssessmentType::kClosed;
  r.pipeline = AssessmentType::kClosed;
  v.rationale = std::move(r);
  return v;
}

}  // namespace

std::string_view to_string(RationaleKind k) {
  switch (k) {
    case RationaleKind::kKeyMatch: return "KEY_MATCH";
    case RationaleKind::kNoKeyMatch: return "NO_KEY_MATCH";
    case RationaleKind::kAllRulesPassed: return "ALL_RULES_PASSED";
    case RationaleKind::kRuleFailed: return "RULE_FAILED";
    case RationaleKind::kCapsuleInvalid: return "CAPSULE_INVALID";
    case RationaleKind::kJudge: return "JUDGE";
  }
  return "UNKNOWN";
}

JudgeUnavailable::JudgeUnavailable(JudgeErrc cause, int attempts, const std::string& message)
    : Error("JUDGE_UNAVAILABLE", message), cause_(cause), attempts_(attempts) {}

AssessmentType payload_type(const AnswerPayload& payload) {
  switch (payload.index()) {
    case 0: return AssessmentType::kClosed;
    case 1: return AssessmentType::kCgt;
    default: return AssessmentType::kOpen;
  }
}

const std::string& payload_text(const AnswerPayload& payload) {
  return std::visit(
      [](const auto& p) -> const std::string& {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ObjectCapsule>) {
          return p.raw_text;
        } else {
          return p.text;
        }
      },
      payload);
}

AnswerPayload make_payload(AssessmentType type, std::string text) {
  switch (type) {
    case AssessmentType::kClosed: return ClosedText{std::move(text)};
    case AssessmentType::kCgt: return ObjectCapsule{std::move(text)};
    case AssessmentType::kOpen: return OpenText{std::move(text)};
  }
  return OpenText{std::move(text)};
}

std::string normalize_closed_answer(std::string_view answer) {
  std::string s = trim(answer);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  // Trailing punctuation may hide behind spaces ("90 ."), so alternate.
  while (!s.empty()) {
    const char c = s.back();
    if (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || is_space(c)) {
      s.pop_back();
    } else {
      break;
    }
  }
  std::string out;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    if (!out.empty()) out += ' ';
    out += canonical_numeral(tok);
    tok.clear();
  };
  for (char c : s) {
    if (is_space(c)) {
      flush();
    } else {
      tok += c;
    }
  }
  flush();
  return out;
}

Verdict grade_closed(std::string_view answer, const std::set<std::string>& key) {
  if (key.empty()) throw Error("BANK", "closed answer key is empty");
  const std::string norm = normalize_closed_answer(answer);
  Rationale r;
  if (key.count(norm)) {
    r.kind = RationaleKind::kKeyMatch;
    r.matched_key = norm;
    r.detail = "answer matches the key";
    return closed_verdict(true, std::move(r));
  }
  r.kind = RationaleKind::kNoKeyMatch;
  r.detail = "normalized answer '" + norm + "' is not in the key";
  return closed_verdict(false, std::move(r));
}

Verdict grade_cgt(const GeometrySession& session, const std::vector<CgtRule>& program,
                  const geometry::Tolerances& tol) {
  if (program.empty()) throw Error("BANK", "rule program is empty");
  Verdict v;
  v.pipeline = AssessmentType::kCgt;
  v.rationale.pipeline = AssessmentType::kCgt;
  for (std::size_t i = 0; i < program.size(); ++i) {
    program[i].validate();
    RuleOutcome o = detail::evaluate_rule(session, program[i], i, tol);
    if (!o.passed && !v.rationale.first_failure) {
      v.rationale.first_failure = i;
      v.rationale.error_tag = o.error_tag;
      v.rationale.detail = std::string(to_string(o.kind)) + ": " + o.detail;
    }
    v.rationale.rule_outcomes.push_back(std::move(o));
  }
  if (v.rationale.first_failure) {
    v.status = Correctness::kIncorrect;
    v.rationale.kind = RationaleKind::kRuleFailed;
  } else {
    v.status = Correctness::kCorrect;
    v.rationale.kind = RationaleKind::kAllRulesPassed;
    v.rationale.detail = "all " + std::to_string(program.size()) + " rules passed";
  }
  return v;
}

Verdict grade_cgt(const ObjectCapsule& capsule, const std::vector<CgtRule>& program,
                  const geometry::Tolerances& tol) {
  if (program.empty()) throw Error("BANK", "rule program is empty");
  GeometrySession session;
  try {
    session = parse(capsule, tol);
  } catch (const CapsuleError& e) {
    Verdict v;
    v.status = Correctness::kIncorrect;
    v.pipeline = AssessmentType::kCgt;
    v.rationale.pipeline = AssessmentType::kCgt;
    v.rationale.kind = RationaleKind::kCapsuleInvalid;
    v.rationale.error_tag = e.code();
    v.rationale.detail = e.what();
    return v;
  }
  return grade_cgt(session, program, tol);
}

PromptDocument assemble_grading_prompt(const QuestionSpec& question, std::string_view answer) {
  if (!question.exemplars || question.exemplars->empty()) {
    throw Error("BANK", question.question_id + ": open grading needs exemplars");
  }
  PromptDocument doc;
  doc.add(std::string(prompt_sections::kInstructions),
          "You grade a student's written answer to a geometry question.\n"
          "Each exemplar below is a model answer judged CORRECT; its concepts attribute lists "
          "the ideas it contains.\n"
          "Judge the student answer CORRECT if it sufficiently incorporates the conceptual "
          "elements present in at least one exemplar, and INCORRECT otherwise.\n"
          "Reply with only a JSON object of the form {\"correct\": true} or "
          "{\"correct\": false}.");
  std::size_t i = 0;
  for (const auto& ex : *question.exemplars) {
    std::string tags;
    for (const auto& t : ex.concept_tags) tags += (tags.empty() ? "" : ",") + t;
    doc.add(std::string(prompt_sections::kExemplar), ex.text,
            {{"index", std::to_string(++i)}, {"judgment", "CORRECT"}, {"concepts", tags}});
  }
  doc.add(std::string(prompt_sections::kProblem), question.prompt);
  doc.add(std::string(prompt_sections::kStudentAnswer), trim(answer));
  return doc;
}

Verdict grade_open(std::string_view answer, const QuestionSpec& question, const JudgeHandle& judge) {
  const PromptDocument prompt = assemble_grading_prompt(question, answer);
  JudgeDecision decision;
  try {
    decision = judge.judge_correctness(prompt);
  } catch (const JudgeError& e) {
    throw JudgeUnavailable(e.errc(), e.attempts(), e.what());
  }
  Verdict v;
  v.status = decision.correct ? Correctness::kCorrect : Correctness::kIncorrect;
  v.pipeline = AssessmentType::kOpen;
  v.rationale.pipeline = AssessmentType::kOpen;
  v.rationale.kind = RationaleKind::kJudge;
  v.rationale.judge_output = decision.raw_output;
  v.rationale.detail = decision.correct ? "judge accepted the answer" : "judge rejected the answer";
  return v;
}

Verdict grade(const QuestionSpec& question, const AnswerPayload& payload, const JudgeHandle* judge) {
  if (payload_type(payload) != question.type) {
    throw Error("PAYLOAD_MISMATCH", question.question_id + " expects a " +
                                        std::string(to_string(question.type)) + " payload");
  }
  switch (question.type) {
    case AssessmentType::kClosed:
      return grade_closed(std::get<ClosedText>(payload).text, *question.closed_key);
    case AssessmentType::kCgt:
      return grade_cgt(std::get<ObjectCapsule>(payload), *question.rule_program,
                       question.effective_tolerances());
    case AssessmentType::kOpen:
      if (judge == nullptr) {
        throw JudgeUnavailable(JudgeErrc::kTransport, 0, "no judge configured for open questions");
      }
      return grade_open(std::get<OpenText>(payload).text, question, *judge);
  }
  throw Error("PAYLOAD_MISMATCH", "unknown question type");
}

}  // namespace geograde
