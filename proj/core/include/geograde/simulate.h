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

#ifndef GEOGRADE_SIMULATE_H_
#define GEOGRADE_SIMULATE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geograde/datastore.h"
#include "geograde/question.h"

namespace geograde {

struct SimulatedQuestion {
  std::string question_id;
  AssessmentType type = AssessmentType::kClosed;
  double p1 = 0.5;          // success probability at attempt 1
  double delta = 0.0;       // added per retry
  double skip = 0.0;        // probability the student never attempts it
};

// Synthetic cohort. Outcomes at attempt k are Bernoulli(p1 + delta (k - 1)),
// stopping at the first success or after max_attempts.
struct CohortConfig {
  std::uint64_t seed = 1;
  int n_students = 0;
  int max_attempts = 4;
  std::int64_t start_ms = 1'700'000'000'000;
  std::vector<SimulatedQuestion> questions;

  // Throws Error("CONFIG") unless probabilities lie in [0, 1], delta >= 0,
  // p1 + (max_attempts - 1) delta <= 1 and ids are unique.
  void validate() const;
};

// Either {"questions": [...]} or the shorthand {"n_questions", "p1",
// "delta", "skip"} that names them Q1..Qn. Throws Error("CONFIG").
CohortConfig cohort_from_json(std::string_view text);
CohortConfig load_cohort(const std::filesystem::path& path);

// Same config, same records, byte for byte.
std::vector<SubmissionRecord> simulate(const CohortConfig& config);

}  // namespace geograde

#endif  // GEOGRADE_SIMULATE_H_
