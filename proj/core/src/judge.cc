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

#include "geograde/judge.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace geograde {
namespace {

std::set<std::string> split_tags(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  std::string tag;
  while (std::getline(ss, tag, ',')) {
    if (!tag.empty()) out.insert(tag);
  }
  return out;
}

class StubBackend final : public JudgeBackend {
 public:
  explicit StubBackend(SynonymTable synonyms) : synonyms_(std::move(synonyms)) {}

  JudgeDecision judge_correctness(const PromptDocument& prompt) const override {
    audit().requests++;
    const PromptSection* answer = prompt.find(prompt_sections::kStudentAnswer);
    if (answer == nullptr) {
      audit().parse_failures++;
      throw JudgeError(JudgeErrc::kMalformedOutput, 1, "prompt has no student answer");
    }
    const std::set<std::string> concepts = synonyms_.concept_set(answer->body);
    bool correct = false;
    for (const PromptSection* ex : prompt.find_all(prompt_sections::kExemplar)) {
      const std::set<std::string> tags = split_tags(ex->attr("concepts").value_or(""));
      if (!tags.empty() && std::includes(concepts.begin(), concepts.end(), tags.begin(), tags.end())) {
        correct = true;
        break;
      }
    }
    return {correct, correct ? R"({"correct":true})" : R"({"correct":false})"};
  }

  std::string generate_feedback_text(const PromptDocument& prompt) const override {
    audit().requests++;
    const PromptSection* tmpl = prompt.find(prompt_sections::kTemplate);
    if (tmpl == nullptr) {
      audit().parse_failures++;
      throw JudgeError(JudgeErrc::kMalformedOutput, 1, "prompt has no feedback template");
    }
    return tmpl->body;
  }

 private:
  SynonymTable synonyms_;
};

class GateLease {
 public:
  explicit GateLease(CallGate* gate) : gate_(gate) {
    if (gate_) gate_->acquire();
  }
  ~GateLease() {
    if (gate_) gate_->release();
  }
  GateLease(const GateLease&) = delete;
  GateLease& operator=(const GateLease&) = delete;

 private:
  CallGate* gate_;
};

}  // namespace

std::string_view to_string(JudgeErrc e) {
  switch (e) {
    case JudgeErrc::kTimeout: return "TIMEOUT";
    case JudgeErrc::kMalformedOutput: return "MALFORMED_OUTPUT";
    case JudgeErrc::kTransport: return "TRANSPORT";
  }
  return "TRANSPORT";
}

JudgeError::JudgeError(JudgeErrc errc, int attempts, const std::string& message)
    : Error(std::string(to_string(errc)), message + " (attempts: " + std::to_string(attempts) + ")"),
      errc_(errc),
      attempts_(attempts) {}

void RemoteJudgeConfig::validate() const {
  if (base_url.empty()) throw Error("CONFIG", "judge base_url is required");
  if (model.empty()) throw Error("CONFIG", "judge model is required");
  if (timeout_ms <= 0) throw Error("CONFIG", "judge timeout_ms must be positive");
  if (max_retries < 0) throw Error("CONFIG", "judge max_retries must be non-negative");
}

CallGate::CallGate(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error("CONFIG", "call gate capacity must be at least 1");
}

void CallGate::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < capacity_; });
  ++in_flight_;
  peak_ = std::max(peak_, in_flight_);
}

void CallGate::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

std::size_t CallGate::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

std::size_t CallGate::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

std::shared_ptr<const JudgeBackend> make_stub_backend(SynonymTable synonyms) {
  return std::make_shared<StubBackend>(std::move(synonyms));
}

JudgeHandle JudgeHandle::stub(SynonymTable synonyms) {
  return JudgeHandle(Mode::kStub, make_stub_backend(std::move(synonyms)));
}

JudgeHandle JudgeHandle::remote(RemoteJudgeConfig config) {
  return JudgeHandle(Mode::kRemote, make_remote_backend(std::move(config)));
}

JudgeHandle JudgeHandle::from_backend(std::shared_ptr<const JudgeBackend> backend) {
  if (!backend) throw Error("CONFIG", "judge backend must not be null");
  return JudgeHandle(Mode::kCustom, std::move(backend));
}

JudgeHandle JudgeHandle::gated(std::shared_ptr<CallGate> gate) const {
  JudgeHandle copy = *this;
  copy.gate_ = std::move(gate);
  return copy;
}

JudgeDecision JudgeHandle::judge_correctness(const PromptDocument& prompt) const {
  backend_->audit().calls++;
  GateLease lease(gate_.get());
  return backend_->judge_correctness(prompt);
}

std::string JudgeHandle::generate_feedback_text(const PromptDocument& prompt) const {
  backend_->audit().calls++;
  GateLease lease(gate_.get());
  return backend_->generate_feedback_text(prompt);
}

}  // namespace geograde
