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

#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>

#include "geograde/judge.h"
#include "httplib.h"
#include "json_util.h"

namespace geograde {
namespace {

using detail::Json;

enum class Task { kGrading, kFeedback };

const char* task_name(Task t) { return t == Task::kGrading ? "grading" : "feedback"; }

Json response_schema(Task t) {
  const char* field = t == Task::kGrading ? "correct" : "feedback";
  const char* type = t == Task::kGrading ? "boolean" : "string";
  return Json{{"type", "object"},
              {"properties", {{field, {{"type", type}}}}},
              {"required", {field}},
              {"additionalProperties", false}};
}

// Returns the value on success, or an empty optional with `why` set.
template <typename T>
std::optional<T> read_payload(const std::string& body, const char* field, std::string& why) {
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::exception&) {
    why = "reply is not a JSON document";
    return std::nullopt;
  }
  if (!doc.is_object() || doc.size() != 1 || !doc.contains(field)) {
    why = std::string("reply must be an object with exactly the field '") + field + "'";
    return std::nullopt;
  }
  const Json& v = doc[field];
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) {
      why = "'correct' must be a boolean";
      return std::nullopt;
    }
  } else {
    if (!v.is_string()) {
      why = "'feedback' must be a string";
      return std::nullopt;
    }
  }
  return v.get<T>();
}

class RemoteBackend final : public JudgeBackend {
 public:
  explicit RemoteBackend(RemoteJudgeConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw Error("CONFIG", "judge base_url is required");
    if (config_.model.empty()) throw Error("CONFIG", "judge model is required");
    if (config_.max_retries < 0) throw Error("CONFIG", "judge max_retries must be non-negative");
    parameters_ = detail::parse_json(config_.parameters_json, "CONFIG");
    if (!parameters_.is_object()) throw Error("CONFIG", "judge parameters must be an object");
  }

  JudgeDecision judge_correctness(const PromptDocument& prompt) const override {
    std::string raw;
    const bool correct = exchange<bool>(Task::kGrading, prompt, "correct", raw);
    return {correct, raw};
  }

  std::string generate_feedback_text(const PromptDocument& prompt) const override {
    std::string raw;
    return exchange<std::string>(Task::kFeedback, prompt, "feedback", raw);
  }

 private:
  template <typename T>
  T exchange(Task task, const PromptDocument& prompt, const char* field, std::string& raw) const {
    PromptDocument current = prompt;
    const int total = config_.max_retries + 1;
    for (int attempt = 1; attempt <= total; ++attempt) {
      raw = post(task, current, attempt);
      std::string why;
      if (auto value = read_payload<T>(raw, field, why)) return *value;
      audit().parse_failures++;
      spdlog::debug("judge reply failed schema check (task={}, attempt={}/{})", task_name(task),
                    attempt, total);
      current = prompt;
      current.add(std::string(prompt_sections::kCorrection),
                  "Your previous reply was rejected: " + why +
                      ". Reply with only a JSON object matching the response schema.");
    }
    throw JudgeError(JudgeErrc::kMalformedOutput, total, "judge reply never matched the schema");
  }

  std::string post(Task task, const PromptDocument& prompt, int attempt) const {
    audit().requests++;
    if (config_.timeout_ms <= 0) {
      audit().timeouts++;
      throw JudgeError(JudgeErrc::kTimeout, attempt, "judge timeout is not positive");
    }
    httplib::Client client(config_.base_url);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (const char* token = std::getenv(config_.auth_token_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    const Json request = {{"model", config_.model},
                          {"task", task_name(task)},
                          {"prompt", prompt.render()},
                          {"response_schema", response_schema(task)},
                          {"parameters", parameters_},
                          {"attempt", attempt}};
    auto res = client.Post("/v1/judgments", headers, request.dump(), "application/json");
    if (!res) {
      const httplib::Error err = res.error();
      if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
        audit().timeouts++;
        spdlog::warn("judge request timed out (attempt {})", attempt);
        throw JudgeError(JudgeErrc::kTimeout, attempt, "judge request timed out");
      }
      audit().transport_errors++;
      spdlog::warn("judge request failed: {} (attempt {})", httplib::to_string(err), attempt);
      throw JudgeError(JudgeErrc::kTransport, attempt,
                       "judge request failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300) {
      audit().transport_errors++;
      spdlog::warn("judge returned HTTP {} (attempt {})", res->status, attempt);
      throw JudgeError(JudgeErrc::kTransport, attempt,
                       "judge returned HTTP " + std::to_string(res->status));
    }
    return res->body;
  }

  RemoteJudgeConfig config_;
  Json parameters_;
};

}  // namespace

std::shared_ptr<const JudgeBackend> make_remote_backend(RemoteJudgeConfig config) {
  return std::make_shared<RemoteBackend>(std::move(config));
}

}  // namespace geograde
