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

#ifndef GEOGRADE_SERVICE_H_
#define GEOGRADE_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "geograde/analytics.h"
#include "geograde/datastore.h"
#include "geograde/feedback.h"
#include "geograde/grading.h"
#include "geograde/judge.h"
#include "geograde/question.h"
#include "geograde/report.h"

namespace geograde {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path bank_path;
  std::filesystem::path store_path;
  // Unset selects the offline stub judge.
  std::optional<RemoteJudgeConfig> judge;
  std::optional<std::filesystem::path> synonyms_path;
  FeedbackConstraints feedback;
  std::size_t judge_call_cap = 4;
  int max_attempts = 4;
  int retry_after_s = 5;

  // Throws Error("CONFIG").
  void validate() const;
};

// Relative paths in the file resolve against its directory. Throws
// Error("CONFIG").
ServiceConfig service_config_from_json(std::string_view text,
                                       const std::filesystem::path& base_dir = {});
ServiceConfig load_service_config(const std::filesystem::path& path);

// Request-level failure. code() is one of UNKNOWN_QUESTION, ITEM_LOCKED,
// MALFORMED_PAYLOAD or JUDGE_UNAVAILABLE.
class ServiceError : public Error {
 public:
  ServiceError(std::string code, const std::string& message,
               std::optional<int> retry_after_s = std::nullopt);
  std::optional<int> retry_after_s() const noexcept { return retry_after_s_; }

 private:
  std::optional<int> retry_after_s_;
};

struct SubmissionResult {
  Verdict verdict;
  std::string feedback_text;
  FeedbackStage stage = FeedbackStage::kPraise;
  FeedbackSource feedback_source = FeedbackSource::kJudge;
  int attempt = 1;
  int attempts_remaining = 0;
  bool locked = false;
};

using Clock = std::function<std::int64_t()>;
// Milliseconds since the Unix epoch from the system clock.
std::int64_t system_clock_ms();

class AssessmentService {
 public:
  struct Options {
    FeedbackConstraints feedback;
    std::size_t judge_call_cap = 4;
    int max_attempts = 4;
    int retry_after_s = 5;
    Clock clock = system_clock_ms;
    SynonymTable synonyms = SynonymTable::defaults();
  };

  // Rebuilds attempt counters from the store. Throws Error("CONFIG") when a
  // question allows more attempts than max_attempts.
  AssessmentService(QuestionBank bank, std::shared_ptr<SubmissionStore> store, JudgeHandle judge,
                    Options options);

  static std::unique_ptr<AssessmentService> from_config(const ServiceConfig& config);

  // The server assigns the attempt number. Submissions to one (student,
  // question) pair are serialized; everything else runs concurrently.
  SubmissionResult handle_submission(const std::string& student_id, const std::string& question_id,
                                     const std::string& answer);

  std::vector<SubmissionRecord> history(const std::string& student_id) const;
  const QuestionBank& bank() const noexcept { return bank_; }
  const CallGate& judge_gate() const noexcept { return *gate_; }
  const SubmissionStore& store() const noexcept { return *store_; }

  // Cleans a snapshot of the store, computes every statistic and writes CSV
  // and SVG files into out_dir.
  std::vector<std::filesystem::path> write_report(const std::filesystem::path& out_dir) const;

 private:
  struct PairSlot {
    std::mutex mu;
    int attempts_used = 0;
    bool locked = false;
  };

  std::shared_ptr<PairSlot> slot(const std::string& student_id, const std::string& question_id);

  QuestionBank bank_;
  std::shared_ptr<SubmissionStore> store_;
  std::shared_ptr<CallGate> gate_;
  JudgeHandle judge_;
  Options options_;
  std::mutex slots_mu_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<PairSlot>> slots_;
};

}  // namespace geograde

#endif  // GEOGRADE_SERVICE_H_
