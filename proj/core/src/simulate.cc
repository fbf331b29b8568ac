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

#include "geograde/simulate.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "json_util.h"

namespace geograde {
namespace {

constexpr const char* kConfig = "CONFIG";

// Uniform in [0, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double probability(const detail::Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return detail::require_number(j, key, kConfig);
}

std::string student_name(int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "S%0*d", width, i);
  return buf;
}

}  // namespace

void CohortConfig::validate() const {
  if (n_students < 0) throw Error(kConfig, "n_students must be non-negative");
  if (max_attempts < 1) throw Error(kConfig, "max_attempts must be at least 1");
  std::set<std::string> ids;
  for (const auto& q : questions) {
    if (q.question_id.empty()) throw Error(kConfig, "question id is empty");
    if (!ids.insert(q.question_id).second) throw Error(kConfig, "duplicate question " + q.question_id);
    auto in_unit = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
    if (!in_unit(q.p1) || !in_unit(q.skip)) {
      throw Error(kConfig, q.question_id + ": probabilities must lie in [0, 1]");
    }
    if (!std::isfinite(q.delta) || q.delta < 0.0) {
      throw Error(kConfig, q.question_id + ": delta must be non-negative");
    }
    if (q.p1 + (max_attempts - 1) * q.delta > 1.0 + 1e-12) {
      throw Error(kConfig, q.question_id + ": p1 + delta (max_attempts - 1) exceeds 1");
    }
  }
}

CohortConfig cohort_from_json(std::string_view text) {
  const detail::Json j = detail::parse_json(text, kConfig);
  if (!j.is_object()) throw Error(kConfig, "cohort config must be an object");
  CohortConfig c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw Error(kConfig, "seed must be an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.n_students = static_cast<int>(detail::require_integer(j, "n_students", kConfig));
  if (j.contains("max_attempts")) {
    c.max_attempts = static_cast<int>(detail::require_integer(j, "max_attempts", kConfig));
  }
  if (j.contains("start_ms")) c.start_ms = detail::require_integer(j, "start_ms", kConfig);
  const double p1 = probability(j, "p1", 0.5);
  const double delta = probability(j, "delta", 0.0);
  const double skip = probability(j, "skip", 0.0);
  if (j.contains("questions")) {
    const auto& qs = j["questions"];
    if (!qs.is_array()) throw Error(kConfig, "questions must be an array");
    for (const auto& q : qs) {
      if (!q.is_object()) throw Error(kConfig, "question entry must be an object");
      SimulatedQuestion sq;
      sq.question_id = detail::require_string(q, "question_id", kConfig);
      if (q.contains("type")) {
        try {
          sq.type = assessment_type_from_string(detail::require_string(q, "type", kConfig));
        } catch (const Error& e) {
          throw Error(kConfig, e.what());
        }
      }
      sq.p1 = probability(q, "p1", p1);
      sq.delta = probability(q, "delta", delta);
      sq.skip = probability(q, "skip", skip);
      c.questions.push_back(std::move(sq));
    }
  } else {
    const long long n = detail::require_integer(j, "n_questions", kConfig);
    if (n < 0) throw Error(kConfig, "n_questions must be non-negative");
    for (long long i = 1; i <= n; ++i) {
      c.questions.push_back({"Q" + std::to_string(i), AssessmentType::kClosed, p1, delta, skip});
    }
  }
  c.validate();
  return c;
}

CohortConfig load_cohort(const std::filesystem::path& path) {
  return cohort_from_json(detail::read_file(path));
}

std::vector<SubmissionRecord> simulate(const CohortConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const int width = static_cast<int>(std::to_string(std::max(config.n_students, 1)).size());
  std::vector<SubmissionRecord> out;
  std::int64_t clock = config.start_ms;
  for (int s = 1; s <= config.n_students; ++s) {
    const std::string student = student_name(s, width);
    for (const auto& q : config.questions) {
      if (unit(rng) < q.skip) continue;
      for (int k = 1; k <= config.max_attempts; ++k) {
        const double p = std::min(1.0, q.p1 + q.delta * (k - 1));
        const bool correct = unit(rng) < p;
        clock += 1000;
        out.emplace_back(student, q.question_id, k,
                         correct ? Correctness::kCorrect : Correctness::kIncorrect,
                         "simulated attempt " + std::to_string(k), "", clock);
        if (correct) break;
      }
    }
  }
  return out;
}

}  // namespace geograde
