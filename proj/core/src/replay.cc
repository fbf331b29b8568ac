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

namespace geograde {

std::vector<const ReplayEntry*> ReplayResult::diff() const {
  std::vector<const ReplayEntry*> out;
  for (const auto& e : entries) {
    if (e.mismatch) out.push_back(&e);
  }
  return out;
}

ReplayResult replay(const std::vector<SubmissionRecord>& raw, const QuestionBank& bank,
                    const JudgeHandle* judge) {
  ReplayResult result;
  int max_attempts = 4;
  for (const auto& q : bank.questions()) max_attempts = std::max(max_attempts, q.max_attempts);
  result.clean = clean(raw, max_attempts);
  std::vector<SubmissionRecord> records = result.clean.records;
  sort_records(records);

  AttemptHistory history;
  const SubmissionRecord* prev = nullptr;
  for (const auto& r : records) {
    if (!prev || prev->student_id() != r.student_id() || prev->question_id() != r.question_id()) {
      history.entries.clear();
    }
    prev = &r;
    ReplayEntry entry{r, std::nullopt, std::nullopt, false, {}};
    const QuestionSpec* q = bank.find(r.question_id());
    Correctness status = r.answer_status();
    if (q == nullptr) {
      entry.note = "unknown question";
    } else if (q->type == AssessmentType::kOpen && judge == nullptr) {
      entry.note = "open question not re-graded without a judge";
    } else {
      try {
        entry.verdict = grade(*q, make_payload(q->type, r.answer()), judge);
        status = entry.verdict->status;
        entry.mismatch = status != r.answer_status();
        if (entry.mismatch) {
          entry.note = "stored " + std::string(to_string(r.answer_status())) + ", re-graded " +
                       std::string(to_string(status));
        }
      } catch (const Error& e) {
        entry.note = e.what();
        entry.mismatch = true;
      }
    }
    history.entries.push_back({r.attempts(), r.answer(), status});
    if (q != nullptr) {
      try {
        Verdict v = entry.verdict.value_or(Verdict{});
        v.status = status;
        entry.stage = plan_feedback(v, history, *q).stage;
      } catch (const Error&) {
        // No stage when the bank has no exemplar for the state.
      }
    }
    (entry.verdict ? result.regraded : result.skipped)++;
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace geograde
