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

#include "geograde/replay.h"

#include <gtest/gtest.h>

#include "constructions.h"

namespace geograde {
namespace {

const QuestionBank& bank() {
  static const QuestionBank kBank = QuestionBank::load(testing::bank_dir());
  return kBank;
}

std::vector<SubmissionRecord> transcript() {
  return load_log(testing::data_dir() / "fixtures" / "fair_meeting_point_log.ndjson");
}

TEST(ReplayTest, TranscriptMatchesWithStubJudge) {
  const JudgeHandle judge = JudgeHandle::stub();
  const auto r = replay(transcript(), bank(), &judge);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_TRUE(r.diff().empty());
  EXPECT_EQ(r.regraded, 3u);
  const FeedbackStage stages[] = {FeedbackStage::kHintStrategic, FeedbackStage::kCorrectiveSpecific,
                                  FeedbackStage::kPraise};
  for (int i = 0; i < 3; ++i) EXPECT_EQ(r.entries[i].stage, stages[i]);
}

TEST(ReplayTest, OpenRecordsSkippedWithoutJudge) {
  const auto r = replay(transcript(), bank());
  EXPECT_EQ(r.skipped, 3u);
  EXPECT_EQ(r.regraded, 0u);
  EXPECT_TRUE(r.diff().empty());
  EXPECT_TRUE(r.entries[0].stage);
}

TEST(ReplayTest, MismatchReported) {
  const auto& pair = testing::bank_constructions().at("Q4");
  const std::vector<SubmissionRecord> log = {
      SubmissionRecord("S1", "Q4", 1, Correctness::kCorrect, pair.incorrect.raw_text, "", 1),
      SubmissionRecord("S2", "Q4", 1, Correctness::kCorrect, pair.correct.raw_text, "", 2),
      SubmissionRecord("S3", "Q1", 1, Correctness::kIncorrect, "circumcenter", "", 3),
      SubmissionRecord("S4", "Q77", 1, Correctness::kIncorrect, "x", "", 4),
  };
  const auto r = replay(log, bank());
  ASSERT_EQ(r.diff().size(), 2u);
  EXPECT_EQ(r.diff()[0]->record.student_id(), "S1");
  EXPECT_EQ(r.diff()[1]->record.student_id(), "S3");
  EXPECT_EQ(r.entries.back().note, "unknown question");
  EXPECT_EQ(r.skipped, 1u);
}

TEST(ReplayTest, CleansBeforeRegrading) {
  auto log = transcript();
  log.push_back(log.back());
  const JudgeHandle judge = JudgeHandle::stub();
  const auto r = replay(log, bank(), &judge);
  EXPECT_EQ(r.clean.dropped(), 1u);
  EXPECT_EQ(r.entries.size(), 3u);
}

}  // namespace
}  // namespace geograde
