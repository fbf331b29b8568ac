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

#include <gtest/gtest.h>

#include "constructions.h"

namespace geograde {
namespace {

using testing::bank_constructions;
using testing::bank_dir;
using testing::object;
using testing::point;

const QuestionBank& bank() {
  static const QuestionBank kBank = QuestionBank::load(bank_dir());
  return kBank;
}

TEST(NormalizeTest, ClosedAnswers) {
  EXPECT_EQ(normalize_closed_answer("  The   CIRCUMCENTER. "), "the circumcenter");
  EXPECT_EQ(normalize_closed_answer("90."), "90");
  EXPECT_EQ(normalize_closed_answer("090.0"), "90");
  EXPECT_EQ(normalize_closed_answer("3.50"), "3.5");
  EXPECT_EQ(normalize_closed_answer("three!?"), "three");
}

TEST(NormalizeTest, Idempotent) {
  for (const char* s : {"  A  b ", "12.000", "0.5.", "Three", "-0.0", "x!"}) {
    const std::string once = normalize_closed_answer(s);
    EXPECT_EQ(normalize_closed_answer(once), once) << s;
  }
}

TEST(ClosedGradingTest, KeyMatch) {
  const auto& q = bank().at("Q1");
  const auto ok = grade(q, ClosedText{"Circumcentre"}, nullptr);
  EXPECT_TRUE(ok.correct());
  EXPECT_EQ(ok.rationale.kind, RationaleKind::kKeyMatch);
  const auto no = grade(q, ClosedText{"incenter"}, nullptr);
  EXPECT_FALSE(no.correct());
  EXPECT_EQ(no.rationale.kind, RationaleKind::kNoKeyMatch);
  EXPECT_TRUE(grade(bank().at("Q2"), ClosedText{"3"}, nullptr).correct());
  EXPECT_TRUE(grade(bank().at("Q2"), ClosedText{" Three. "}, nullptr).correct());
}

TEST(CgtGradingTest, BankConstructions) {
  for (const auto& [id, pair] : bank_constructions()) {
    const auto& q = bank().at(id);
    const Verdict good = grade(q, pair.correct, nullptr);
    EXPECT_TRUE(good.correct()) << id << ": " << good.rationale.detail;
    EXPECT_EQ(good.rationale.kind, RationaleKind::kAllRulesPassed) << id;
    const Verdict bad = grade(q, pair.incorrect, nullptr);
    EXPECT_FALSE(bad.correct()) << id;
    EXPECT_EQ(bad.rationale.kind, RationaleKind::kRuleFailed) << id;
    EXPECT_TRUE(bad.rationale.first_failure) << id;
  }
}

TEST(CgtGradingTest, ReflexMeasurementCarriesTag) {
  const auto v = grade(bank().at("Q10"), testing::obtuse_angle_capsule(true), nullptr);
  EXPECT_FALSE(v.correct());
  EXPECT_EQ(v.rationale.error_tag, "reflex_angle_measured");
}

TEST(CgtGradingTest, MissingBisectorTag) {
  const auto v = grade(bank().at("Q4"), bank_constructions().at("Q4").incorrect, nullptr);
  EXPECT_EQ(v.rationale.error_tag, "missing_bisector");
}

TEST(CgtGradingTest, InvalidCapsuleGradesIncorrect) {
  const auto v = grade(bank().at("Q4"), ObjectCapsule{"[{"}, nullptr);
  EXPECT_FALSE(v.correct());
  EXPECT_EQ(v.rationale.kind, RationaleKind::kCapsuleInvalid);
}

TEST(CgtGradingTest, DeterministicAndOrderStable) {
  const auto& pair = bank_constructions().at("Q17");
  const auto& q = bank().at("Q17");
  EXPECT_EQ(grade(q, pair.correct, nullptr), grade(q, pair.correct, nullptr));
  EXPECT_EQ(grade(q, pair.incorrect, nullptr), grade(q, pair.incorrect, nullptr));
}

TEST(CgtGradingTest, OutcomePerRule) {
  const auto& q = bank().at("Q18");
  const auto v = grade(q, bank_constructions().at("Q18").incorrect, nullptr);
  ASSERT_EQ(v.rationale.rule_outcomes.size(), q.rule_program->size());
  EXPECT_TRUE(v.rationale.rule_outcomes[0].passed);
  EXPECT_FALSE(v.rationale.rule_outcomes[1].passed);
  EXPECT_EQ(v.rationale.rule_outcomes[1].measured, 5.0);
}

TEST(CgtGradingTest, LengthEqualsRule) {
  CgtRule rule;
  rule.kind = RuleKind::kLengthEquals;
  rule.target = {std::nullopt, ObjectKind::kLength};
  rule.value = 5.0;
  const std::vector<SessionObject> objs = {point("A", 0, 0), point("B", 3, 4),
                                           object("s", ObjectKind::kSegment, {"A", "B"}),
                                           object("l", ObjectKind::kLength, {"s"})};
  EXPECT_TRUE(grade_cgt(serialize(objs), {rule}).correct());
  rule.value = 5.1;
  EXPECT_FALSE(grade_cgt(serialize(objs), {rule}).correct());
}

TEST(CgtGradingTest, PointOnLineRule) {
  CgtRule rule;
  rule.kind = RuleKind::kPointOnLine;
  rule.target = {"P", std::nullopt};
  rule.line = ObjectSelector{"l", std::nullopt};
  std::vector<SessionObject> objs = {point("A", 0, 0), point("B", 2, 2),
                                     object("l", ObjectKind::kLine, {"A", "B"}), point("P", 5, 5)};
  EXPECT_TRUE(grade_cgt(serialize(objs), {rule}).correct());
  objs.back() = point("P", 5, 6);
  EXPECT_FALSE(grade_cgt(serialize(objs), {rule}).correct());
}

TEST(GradeDispatchTest, PayloadMismatch) {
  try {
    grade(bank().at("Q1"), OpenText{"x"}, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "PAYLOAD_MISMATCH");
  }
}

TEST(GradeDispatchTest, OpenWithoutJudgeIsUnavailable) {
  EXPECT_THROW(grade(bank().at("Q6"), OpenText{"x"}, nullptr), JudgeUnavailable);
}

TEST(GradeDispatchTest, MakePayloadRoundTrip) {
  const auto p = make_payload(AssessmentType::kCgt, "[]");
  EXPECT_EQ(payload_type(p), AssessmentType::kCgt);
  EXPECT_EQ(payload_text(p), "[]");
}

TEST(OpenGradingTest, StubJudgeUsesExemplarConcepts) {
  const JudgeHandle judge = JudgeHandle::stub();
  const auto& q6 = bank().at("Q6");
  EXPECT_TRUE(grade_open("The distance from the circumcenter to each vertex is equal.", q6, judge).correct());
  EXPECT_FALSE(grade_open("Equal", q6, judge).correct());
  EXPECT_FALSE(grade_open("The length of the segment is equal.", q6, judge).correct());
}

TEST(OpenGradingTest, TwoBisectorVariantAcceptsTwoBisectorAnswer) {
  const JudgeHandle judge = JudgeHandle::stub();
  const std::string answer = "Draw the perpendicular bisectors of two sides; where they intersect is the circumcenter.";
  EXPECT_FALSE(grade_open(answer, bank().at("Q3"), judge).correct());
  const auto variant = QuestionBank::load(testing::data_dir() / "bank_variants" / "q3_two_bisectors.json");
  EXPECT_TRUE(grade_open(answer, variant.at("Q3"), judge).correct());
}

TEST(OpenGradingTest, PromptHoldsExemplarsAndTrimmedAnswer) {
  const auto doc = assemble_grading_prompt(bank().at("Q9"), "  an answer \n");
  EXPECT_EQ(doc.find_all("exemplar").size(), bank().at("Q9").exemplars->size());
  ASSERT_NE(doc.find("student_answer"), nullptr);
  EXPECT_EQ(doc.find("student_answer")->body, "an answer");
}

}  // namespace
}  // namespace geograde
