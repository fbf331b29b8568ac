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

#include "geograde/service.h"

#include <chrono>
#include <set>

#include <spdlog/spdlog.h>

#include "json_util.h"

namespace geograde {
namespace {

constexpr const char* kConfig = "CONFIG";

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

void check_keys(const detail::Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw Error(kConfig, where + ": unknown key '" + it.key() + "'");
  }
}

RemoteJudgeConfig judge_from_json(const detail::Json& j) {
  check_keys(j, {"base_url", "model", "auth_token_env", "timeout_ms", "max_retries", "parameters"},
             "judge");
  RemoteJudgeConfig c;
  c.base_url = detail::require_string(j, "base_url", kConfig);
  c.model = detail::require_string(j, "model", kConfig);
  if (j.contains("auth_token_env")) c.auth_token_env = detail::require_string(j, "auth_token_env", kConfig);
  if (j.contains("timeout_ms")) c.timeout_ms = static_cast<int>(detail::require_integer(j, "timeout_ms", kConfig));
  if (j.contains("max_retries")) {
    c.max_retries = static_cast<int>(detail::require_integer(j, "max_retries", kConfig));
  }
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw Error(kConfig, "judge.parameters must be an object");
    c.parameters_json = j["parameters"].dump();
  }
  return c;
}

FeedbackConstraints feedback_from_json(const detail::Json& j) {
  check_keys(j, {"max_chars", "target_chars", "forbidden_phrases", "math_markup", "harsh_phrases",
                 "collaborative_cutoff"},
             "feedback");
  FeedbackConstraints c;
  if (j.contains("max_chars")) c.max_chars = static_cast<int>(detail::require_integer(j, "max_chars", kConfig));
  if (j.contains("target_chars")) {
    c.target_chars = static_cast<int>(detail::require_integer(j, "target_chars", kConfig));
  }
  auto strings = [&j](const char* key) {
    std::vector<std::string> out;
    const auto& arr = detail::require(j, key, kConfig);
    if (!arr.is_array()) throw Error(kConfig, std::string("feedback.") + key + " must be an array");
    for (const auto& s : arr) {
      if (!s.is_string()) throw Error(kConfig, std::string("feedback.") + key + " holds strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  if (j.contains("forbidden_phrases")) c.forbidden_phrases = strings("forbidden_phrases");
  if (j.contains("harsh_phrases")) c.harsh_phrases = strings("harsh_phrases");
  if (j.contains("math_markup")) c.math_markup = detail::require_bool(j, "math_markup", kConfig);
  if (j.contains("collaborative_cutoff")) {
    c.collaborative_cutoff = detail::require_number(j, "collaborative_cutoff", kConfig);
  }
  c.validate();
  return c;
}

}  // namespace

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw Error(kConfig, "port out of range");
  if (judge_call_cap < 1) throw Error(kConfig, "judge_call_cap must be at least 1");
  if (max_attempts < 1) throw Error(kConfig, "max_attempts must be at least 1");
  if (retry_after_s < 0) throw Error(kConfig, "retry_after_s must be non-negative");
  if (!std::filesystem::exists(bank_path)) throw Error(kConfig, "bank not found: " + bank_path.string());
  const auto store_dir = store_path.parent_path();
  if (store_path.empty() || (!store_dir.empty() && !std::filesystem::is_directory(store_dir))) {
    throw Error(kConfig, "datastore directory not found: " + store_path.string());
  }
  if (synonyms_path && !std::filesystem::exists(*synonyms_path)) {
    throw Error(kConfig, "synonyms file not found: " + synonyms_path->string());
  }
  if (judge) judge->validate();
  feedback.validate();
}

ServiceConfig service_config_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  const detail::Json j = detail::parse_json(text, kConfig);
  if (!j.is_object()) throw Error(kConfig, "service config must be an object");
  check_keys(j, {"host", "port", "bank", "store", "judge", "synonyms", "feedback", "judge_call_cap",
                 "max_attempts", "retry_after_s"},
             "service config");
  ServiceConfig c;
  if (j.contains("host")) c.host = detail::require_string(j, "host", kConfig);
  if (j.contains("port")) c.port = static_cast<int>(detail::require_integer(j, "port", kConfig));
  c.bank_path = resolve(base_dir, detail::require_string(j, "bank", kConfig));
  c.store_path = resolve(base_dir, detail::require_string(j, "store", kConfig));
  if (j.contains("synonyms")) c.synonyms_path = resolve(base_dir, detail::require_string(j, "synonyms", kConfig));
  if (j.contains("judge")) {
    const auto& jj = j["judge"];
    if (jj.is_string() && jj.get<std::string>() == "stub") {
      c.judge.reset();
    } else if (jj.is_object()) {
      c.judge = judge_from_json(jj);
    } else {
      throw Error(kConfig, "judge must be \"stub\" or an object");
    }
  }
  if (j.contains("feedback")) {
    if (!j["feedback"].is_object()) throw Error(kConfig, "feedback must be an object");
    c.feedback = feedback_from_json(j["feedback"]);
  }
  if (j.contains("judge_call_cap")) {
    const long long cap = detail::require_integer(j, "judge_call_cap", kConfig);
    if (cap < 1) throw Error(kConfig, "judge_call_cap must be at least 1");
    c.judge_call_cap = static_cast<std::size_t>(cap);
  }
  if (j.contains("max_attempts")) {
    c.max_attempts = static_cast<int>(detail::require_integer(j, "max_attempts", kConfig));
  }
  if (j.contains("retry_after_s")) {
    c.retry_after_s = static_cast<int>(detail::require_integer(j, "retry_after_s", kConfig));
  }
  return c;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  return service_config_from_json(detail::read_file(path), path.parent_path());
}

ServiceError::ServiceError(std::string code, const std::string& message,
                           std::optional<int> retry_after_s)
    : Error(std::move(code), message), retry_after_s_(retry_after_s) {}

std::int64_t system_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

AssessmentService::AssessmentService(QuestionBank bank, std::shared_ptr<SubmissionStore> store,
                                     JudgeHandle judge, Options options)
    : bank_(std::move(bank)),
      store_(std::move(store)),
      gate_(std::make_shared<CallGate>(options.judge_call_cap)),
      judge_(judge.gated(gate_)),
      options_(std::move(options)) {
  if (!store_) throw Error(kConfig, "service needs a datastore");
  options_.feedback.validate();
  for (const auto& q : bank_.questions()) {
    if (q.max_attempts > options_.max_attempts) {
      throw Error(kConfig, q.question_id + " allows more attempts than max_attempts");
    }
  }
  // Counters come from the cleaned view so a legacy log cannot push a pair
  // past its budget.
  const CleanLog cleaned = clean(store_->snapshot(), options_.max_attempts);
  for (const auto& r : cleaned.records) {
    auto& s = slots_[{r.student_id(), r.question_id()}];
    if (!s) s = std::make_shared<PairSlot>();
    s->attempts_used = std::max(s->attempts_used, r.attempts());
    const QuestionSpec* q = bank_.find(r.question_id());
    const int budget = q ? q->max_attempts : options_.max_attempts;
    if (r.correct() || s->attempts_used >= budget) s->locked = true;
  }
}

std::unique_ptr<AssessmentService> AssessmentService::from_config(const ServiceConfig& config) {
  config.validate();
  SynonymTable synonyms =
      config.synonyms_path ? SynonymTable::load(*config.synonyms_path) : SynonymTable::defaults();
  JudgeHandle judge = config.judge ? JudgeHandle::remote(*config.judge) : JudgeHandle::stub(synonyms);
  Options options;
  options.feedback = config.feedback;
  options.judge_call_cap = config.judge_call_cap;
  options.max_attempts = config.max_attempts;
  options.retry_after_s = config.retry_after_s;
  options.synonyms = std::move(synonyms);
  return std::make_unique<AssessmentService>(QuestionBank::load(config.bank_path),
                                             std::make_shared<SubmissionStore>(config.store_path),
                                             std::move(judge), std::move(options));
}

std::shared_ptr<AssessmentService::PairSlot> AssessmentService::slot(const std::string& student_id,
                                                                     const std::string& question_id) {
  std::lock_guard lock(slots_mu_);
  auto& s = slots_[{student_id, question_id}];
  if (!s) s = std::make_shared<PairSlot>();
  return s;
}

SubmissionResult AssessmentService::handle_submission(const std::string& student_id,
                                                      const std::string& question_id,
                                                      const std::string& answer) {
  if (student_id.empty()) throw ServiceError("MALFORMED_PAYLOAD", "student_id is empty");
  const QuestionSpec* q = bank_.find(question_id);
  if (q == nullptr) throw ServiceError("UNKNOWN_QUESTION", "no question " + question_id);
  if (answer.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ServiceError("MALFORMED_PAYLOAD", "answer is empty");
  }

  auto pair = slot(student_id, question_id);
  std::lock_guard lock(pair->mu);
  if (pair->locked) throw ServiceError("ITEM_LOCKED", question_id + " accepts no more submissions");
  const int attempt = pair->attempts_used + 1;

  Verdict verdict;
  try {
    verdict = grade(*q, make_payload(q->type, answer), &judge_);
  } catch (const JudgeUnavailable& e) {
    spdlog::warn("judge unavailable for {} after {} attempts", question_id, e.attempts());
    throw ServiceError("JUDGE_UNAVAILABLE", e.what(), options_.retry_after_s);
  }

  // Earlier attempts of this pair, oldest first.
  AttemptHistory history;
  for (const auto& r : store_->load({student_id, question_id, std::nullopt, std::nullopt})) {
    if (r.attempts() < attempt) history.entries.push_back({r.attempts(), r.answer(), r.answer_status()});
  }
  std::sort(history.entries.begin(), history.entries.end(),
            [](const auto& a, const auto& b) { return a.attempt_no < b.attempt_no; });
  history.entries.push_back({attempt, answer, verdict.status});

  std::optional<double> difficulty;
  if (options_.feedback.collaborative_cutoff) {
    try {
      difficulty = difficulty_index(clean(store_->snapshot(), options_.max_attempts).records, question_id)
                       .value();
    } catch (const Error&) {
      // No attempts yet: no difficulty estimate.
    }
  }

  FeedbackResult fb = generate_feedback(verdict, history, *q, options_.feedback, judge_,
                                        options_.synonyms, difficulty);
  store_->append(SubmissionRecord(student_id, question_id, attempt, verdict.status, answer, fb.text,
                                  options_.clock()));
  pair->attempts_used = attempt;
  pair->locked = verdict.correct() || attempt >= q->max_attempts;

  SubmissionResult out;
  out.verdict = std::move(verdict);
  out.feedback_text = std::move(fb.text);
  out.stage = fb.directive.stage;
  out.feedback_source = fb.source;
  out.attempt = attempt;
  out.attempts_remaining = pair->locked ? 0 : q->max_attempts - attempt;
  out.locked = pair->locked;
  return out;
}

std::vector<SubmissionRecord> AssessmentService::history(const std::string& student_id) const {
  return store_->load({student_id, std::nullopt, std::nullopt, std::nullopt});
}

std::vector<std::filesystem::path> AssessmentService::write_report(
    const std::filesystem::path& out_dir) const {
  const CleanLog cleaned = clean(store_->snapshot(), options_.max_attempts);
  ReportInputs inputs;
  const std::set<std::string> seen = [&] {
    std::set<std::string> s;
    for (const auto& r : cleaned.records) s.insert(r.question_id());
    return s;
  }();
  for (const auto& id : bank_.presentation_order()) {
    if (seen.count(id)) inputs.question_order.push_back(id);
  }
  inputs.types = bank_.type_map();
  const PsychometricReport rep = build_report(cleaned.records, inputs);
  auto files = emit_report(rep, ReportFormat::kCsv, out_dir);
  const auto svgs = emit_report(rep, ReportFormat::kSvgPlots, out_dir);
  files.insert(files.end(), svgs.begin(), svgs.end());
  return files;
}

}  // namespace geograde
