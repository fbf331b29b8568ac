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

#ifndef GEOGRADE_JUDGE_H_
#define GEOGRADE_JUDGE_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "geograde/error.h"
#include "geograde/prompt.h"
#include "geograde/synonyms.h"

namespace geograde {

struct JudgeDecision {
  bool correct = false;
  // The schema-conforming payload the decision was read from.
  std::string raw_output;
};

enum class JudgeErrc { kTimeout, kMalformedOutput, kTransport };
std::string_view to_string(JudgeErrc e);

class JudgeError : public Error {
 public:
  JudgeError(JudgeErrc errc, int attempts, const std::string& message);
  JudgeErrc errc() const noexcept { return errc_; }
  // Requests made before giving up.
  int attempts() const noexcept { return attempts_; }

 private:
  JudgeErrc errc_;
  int attempts_;
};

// Monotonic counters, safe to read while calls are in flight.
struct JudgeAudit {
  std::atomic<std::uint64_t> calls{0};
  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> parse_failures{0};
  std::atomic<std::uint64_t> timeouts{0};
  std::atomic<std::uint64_t> transport_errors{0};
};

class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  virtual JudgeDecision judge_correctness(const PromptDocument& prompt) const = 0;
  virtual std::string generate_feedback_text(const PromptDocument& prompt) const = 0;

  JudgeAudit& audit() const noexcept { return audit_; }

 private:
  mutable JudgeAudit audit_;
};

struct RemoteJudgeConfig {
  // scheme://host[:port]; requests go to <base_url>/v1/judgments.
  std::string base_url;
  std::string model;
  // Name of the environment variable holding the bearer token.
  std::string auth_token_env = "GEOGRADE_JUDGE_TOKEN";
  int timeout_ms = 20000;
  int max_retries = 2;
  // Forwarded verbatim as the request's "parameters" object.
  std::string parameters_json = "{}";

  // Throws Error("CONFIG") unless timeout_ms > 0, max_retries >= 0 and the
  // base URL and model are set.
  void validate() const;
};

// Bounds the number of judge calls in flight across every handle sharing it.
class CallGate {
 public:
  explicit CallGate(std::size_t capacity);

  void acquire();
  void release();
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t in_flight() const;
  std::size_t peak() const;

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::size_t peak_ = 0;
};

// Cheap to copy; copies share the backend, its audit counters and the gate.
class JudgeHandle {
 public:
  enum class Mode { kRemote, kStub, kCustom };

  // Deterministic judge: an answer is correct iff its concept set covers the
  // concept tags of at least one exemplar in the prompt. Feedback requests
  // echo the prompt's "template" section.
  static JudgeHandle stub(SynonymTable synonyms = SynonymTable::defaults());
  static JudgeHandle remote(RemoteJudgeConfig config);
  static JudgeHandle from_backend(std::shared_ptr<const JudgeBackend> backend);

  JudgeHandle gated(std::shared_ptr<CallGate> gate) const;

  Mode mode() const noexcept { return mode_; }
  JudgeDecision judge_correctness(const PromptDocument& prompt) const;
  std::string generate_feedback_text(const PromptDocument& prompt) const;
  const JudgeAudit& audit() const noexcept { return backend_->audit(); }

 private:
  JudgeHandle(Mode mode, std::shared_ptr<const JudgeBackend> backend)
      : mode_(mode), backend_(std::move(backend)) {}

  Mode mode_;
  std::shared_ptr<const JudgeBackend> backend_;
  std::shared_ptr<CallGate> gate_;
};

std::shared_ptr<const JudgeBackend> make_stub_backend(SynonymTable synonyms);
std::shared_ptr<const JudgeBackend> make_remote_backend(RemoteJudgeConfig config);

// Names of the prompt sections the judge contract relies on.
namespace prompt_sections {
inline constexpr std::string_view kInstructions = "instructions";
inline constexpr std::string_view kExemplar = "exemplar";
inline constexpr std::string_view kProblem = "problem";
inline constexpr std::string_view kStudentAnswer = "student_answer";
inline constexpr std::string_view kTemplate = "template";
inline constexpr std::string_view kCorrection = "correction";
}  // namespace prompt_sections

}  // namespace geograde

#endif  // GEOGRADE_JUDGE_H_
