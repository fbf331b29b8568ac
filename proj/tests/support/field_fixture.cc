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

#include "field_fixture.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace geograde::fixtures {
namespace {

// Outcome of one student on one item: 1..4 first correct attempt,
// kNeverSolved after four incorrect attempts, kSkipped when not attempted.
constexpr int kNeverSolved = 0;
constexpr int kSkipped = -1;
constexpr std::int64_t kStartMs = 1'700'000'000'000;

using Outcomes = std::vector<int>;  // indexed by student

bool converts(int outcome) { return outcome >= 2; }

std::string student_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "S%02d", index + 1);
  return buf;
}

std::set<int> range_set(int first, int last) {
  std::set<int> out;
  for (int i = first; i <= last; ++i) out.insert(i);
  return out;
}

// Distributes the item's outcome pool over the cohort. Fixed students are
// placed first, then restricted students (no conversion), then students who
// must convert, then everyone else in a rotated order.
Outcomes assign(const ItemCounts& c, std::size_t item, const std::map<int, int>& fixed,
                const std::set<int>& no_conversion, const std::set<int>& must_convert) {
  std::map<int, int> pool;
  for (int k = 0; k < 4; ++k) pool[k + 1] = c.solved_at[k];
  pool[kNeverSolved] = c.never_solved;
  pool[kSkipped] = c.not_attempted;
  Outcomes out(kCohortSize, kSkipped);
  std::vector<bool> placed(kCohortSize, false);
  auto take = [&](int student, std::initializer_list<int> preference) {
    for (int o : preference) {
      if (pool[o] > 0) {
        --pool[o];
        out[student] = o;
        placed[student] = true;
        return;
      }
    }
    throw std::logic_error(c.question_id + ": outcome pool exhausted for " + student_name(student));
  };
  for (const auto& [student, o] : fixed) take(student, {o});
  for (int s : no_conversion) {
    if (!placed[s]) take(s, {1, kNeverSolved, kSkipped});
  }
  for (int s : must_convert) {
    if (!placed[s]) take(s, {2, 3, 4});
  }
  const int offset = static_cast<int>(item * 11) % kCohortSize;
  for (int i = 0; i < kCohortSize; ++i) {
    const int s = (i + offset) % kCohortSize;
    if (!placed[s]) take(s, {1, 2, 3, 4, kNeverSolved, kSkipped});
  }
  return out;
}

void emit(std::vector<SubmissionRecord>& log, std::int64_t& clock, int student,
          const std::string& question, const std::vector<Correctness>& attempts) {
  for (std::size_t k = 0; k < attempts.size(); ++k) {
    clock += 60'000;
    log.emplace_back(student_name(student), question, static_cast<int>(k + 1), attempts[k],
                     "answer " + std::to_string(k + 1), "", clock);
  }
}

}  // namespace

const std::vector<ItemCounts>& item_response_counts() {
  static const std::vector<ItemCounts> kCounts = {
      {"Q1", {43, 22, 6, 4}, 4, 0},   {"Q2", {71, 2, 1, 3}, 2, 0},
      {"Q3", {30, 12, 10, 3}, 24, 0}, {"Q4", {53, 11, 2, 0}, 12, 1},
      {"Q5", {36, 15, 6, 3}, 13, 6},  {"Q6", {47, 9, 3, 0}, 19, 1},
      {"Q7", {37, 12, 2, 1}, 25, 2},  {"Q8", {70, 4, 1, 0}, 2, 2},
      {"Q9", {55, 10, 3, 0}, 10, 1},  {"Q10", {33, 11, 2, 1}, 29, 3},
      {"Q11", {50, 9, 8, 1}, 9, 2},   {"Q12", {27, 3, 1, 1}, 5, 42},
      {"Q13", {46, 7, 4, 1}, 18, 3},  {"Q14", {26, 5, 0, 1}, 6, 41},
      {"Q15", {31, 13, 5, 2}, 25, 3}, {"Q16", {49, 7, 2, 0}, 16, 5},
      {"Q17", {36, 17, 6, 0}, 14, 6}, {"Q18", {29, 6, 1, 1}, 22, 20},
  };
  return kCounts;
}

std::vector<std::string> question_order() {
  std::vector<std::string> out;
  for (const auto& c : item_response_counts()) out.push_back(c.question_id);
  return out;
}

std::map<std::string, AssessmentType> question_types() {
  std::map<std::string, AssessmentType> m;
  for (const char* q : {"Q1", "Q2"}) m[q] = AssessmentType::kClosed;
  for (const char* q : {"Q4", "Q5", "Q7", "Q8", "Q10", "Q12", "Q14", "Q17", "Q18"}) {
    m[q] = AssessmentType::kCgt;
  }
  for (const char* q : {"Q3", "Q6", "Q9", "Q11", "Q13", "Q15", "Q16"}) m[q] = AssessmentType::kOpen;
  return m;
}

std::vector<SubmissionRecord> field_study_log() {
  // Students 0..13 reach Q10 without any conversion. Every other student
  // converts at least once on Q1, Q3 or Q5.
  const std::set<int> unconverted = range_set(0, 13);
  const auto& counts = item_response_counts();
  std::vector<Outcomes> grid;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const ItemCounts& c = counts[i];
    std::map<int, int> fixed;
    std::set<int> no_conversion;
    std::set<int> must_convert;
    if (c.question_id == "Q1") {
      must_convert = range_set(14, 42);
      for (int s : {76, 77, 78}) must_convert.insert(s);
    } else if (c.question_id == "Q3") {
      must_convert = range_set(43, 67);
    } else if (c.question_id == "Q5") {
      must_convert = range_set(68, 75);
    }
    if (i < 9) no_conversion = unconverted;
    if (c.question_id == "Q10") {
      for (int s = 0; s <= 8; ++s) fixed[s] = 1;
      fixed[9] = 2;
      for (int s = 10; s <= 13; ++s) fixed[s] = kNeverSolved;
      for (int s : {76, 77, 78}) fixed[s] = kSkipped;
    } else if (c.question_id == "Q11") {
      fixed[0] = 2;
      fixed[1] = 3;
      fixed[2] = 3;
      for (int s : {3, 4, 5, 6, 7, 8, 10, 11}) fixed[s] = 1;
      fixed[12] = kNeverSolved;
      fixed[13] = kNeverSolved;
    } else if (c.question_id == "Q18") {
      fixed[3] = 1;
      fixed[4] = 1;
      fixed[5] = kNeverSolved;
      fixed[6] = kNeverSolved;
      for (int s : {7, 8, 10, 11, 12, 13}) fixed[s] = kSkipped;
    } else if (i > 10) {
      no_conversion = range_set(3, 6);
    }
    grid.push_back(assign(c, i, fixed, no_conversion, must_convert));
  }

  std::vector<SubmissionRecord> log;
  std::int64_t clock = kStartMs;
  for (int s = 0; s < kCohortSize; ++s) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const int o = grid[i][s];
      if (o == kSkipped) continue;
      std::vector<Correctness> attempts(o == kNeverSolved ? kMaxAttempts : o, Correctness::kIncorrect);
      if (o != kNeverSolved) attempts.back() = Correctness::kCorrect;
      emit(log, clock, s, counts[i].question_id, attempts);
    }
  }
  return log;
}

const std::vector<ConversionCount>& conversion_counts() {
  static const std::vector<ConversionCount> kCounts = {
      {"Q1", 32, 52},  {"Q2", 6, 17},   {"Q3", 25, 75},  {"Q4", 13, 34},  {"Q5", 24, 59},
      {"Q6", 12, 48},  {"Q7", 15, 69},  {"Q8", 5, 10},   {"Q9", 13, 38},  {"Q10", 14, 52},
      {"Q11", 18, 38}, {"Q12", 5, 12},  {"Q13", 12, 35}, {"Q14", 6, 12},  {"Q15", 20, 59},
      {"Q16", 9, 29},  {"Q17", 23, 40}, {"Q18", 8, 29},
  };
  return kCounts;
}

std::vector<SubmissionRecord> conversion_log() {
  // One opportunity per student and item: incorrect then correct, or
  // incorrect twice.
  const auto& counts = conversion_counts();
  std::vector<std::vector<int>> kind(counts.size(), std::vector<int>(kCohortSize, 0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int offset = static_cast<int>(i * 17) % kCohortSize;
    for (int j = 0; j < counts[i].opportunities; ++j) {
      kind[i][(j + offset) % kCohortSize] = j < counts[i].converted ? 1 : 2;
    }
  }
  std::vector<SubmissionRecord> log;
  std::int64_t clock = kStartMs;
  for (int s = 0; s < kCohortSize; ++s) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (kind[i][s] == 0) continue;
      const Correctness second = kind[i][s] == 1 ? Correctness::kCorrect : Correctness::kIncorrect;
      emit(log, clock, s, counts[i].question_id, {Correctness::kIncorrect, second});
    }
  }
  return log;
}

}  // namespace geograde::fixtures
