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

#ifndef GEOGRADE_REPLAY_H_
#define GEOGRADE_REPLAY_H_

#include <optional>
#include <string>
#include <vector>

#include "geograde/datastore.h"
#include "geograde/feedback.h"
#include "geograde/grading.h"
#include "geograde/judge.h"
#include "geograde/question.h"

namespace geograde {

struct ReplayEntry {
  SubmissionRecord record;
  // Unset when the record was not re-graded (unknown question, or an open
  // question with no judge).
  std::optional<Verdict> verdict;
  std::optional<FeedbackStage> stage;
  bool mismatch = false;
  std::string note;
};

struct ReplayResult {
  CleanLog clean;
  // Clean records in (student, question, received_at) order.
  std::vector<ReplayEntry> entries;
  std::size_t regraded = 0;
  std::size_t skipped = 0;

  std::vector<const ReplayEntry*> diff() const;
};

// Cleans the log, then re-grades each surviving record against the bank and
// recomputes its feedback stage from the pair's history. Closed and
// constructive records are always re-graded; open records only when a judge
// is given.
ReplayResult replay(const std::vector<SubmissionRecord>& raw, const QuestionBank& bank,
                    const JudgeHandle* judge = nullptr);

}  // namespace geograde

#endif  // GEOGRADE_REPLAY_H_
