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

#ifndef GEOGRADE_DATASTORE_H_
#define GEOGRADE_DATASTORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geograde/error.h"

namespace geograde {

// One graded submission. Construction validates every field, so a record in
// hand is always complete.
class SubmissionRecord {
 public:
  // Throws Error("INVALID_RECORD") on an empty id or attempts < 1.
  SubmissionRecord(std::string student_id, std::string question_id, int attempts,
                   Correctness answer_status, std::string answer, std::string feedback,
                   std::int64_t received_at);

  const std::string& student_id() const noexcept { return student_id_; }
  const std::string& question_id() const noexcept { return question_id_; }
  int attempts() const noexcept { return attempts_; }
  Correctness answer_status() const noexcept { return answer_status_; }
  bool correct() const noexcept { return answer_status_ == Correctness::kCorrect; }
  const std::string& answer() const noexcept { return answer_; }
  const std::string& feedback() const noexcept { return feedback_; }
  // Milliseconds since the Unix epoch.
  std::int64_t received_at() const noexcept { return received_at_; }

  // Single-line JSON object, fields in schema order.
  std::string to_json_line() const;
  // Throws Error("INVALID_RECORD") on a missing or mistyped field.
  static SubmissionRecord from_json_line(std::string_view line);

  friend bool operator==(const SubmissionRecord&, const SubmissionRecord&) = default;

 private:
  std::string student_id_;
  std::string question_id_;
  int attempts_;
  Correctness answer_status_;
  std::string answer_;
  std::string feedback_;
  std::int64_t received_at_;
};

struct RecordFilter {
  std::optional<std::string> student_id;
  std::optional<std::string> question_id;
  // Inclusive bounds on received_at.
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;

  bool matches(const SubmissionRecord& r) const;
};

// Sorts by (student_id, question_id, received_at, attempts), stable.
void sort_records(std::vector<SubmissionRecord>& records);

// Append-only NDJSON file. Each append is fsync'ed before it returns. A torn
// final line left by a crash is truncated when the store is opened.
class SubmissionStore {
 public:
  // Creates the file if absent. Throws Error("IO").
  explicit SubmissionStore(std::filesystem::path path);
  ~SubmissionStore();
  SubmissionStore(const SubmissionStore&) = delete;
  SubmissionStore& operator=(const SubmissionStore&) = delete;

  // Throws Error("STORAGE_FULL") when the device is out of space, Error("IO")
  // otherwise.
  void append(const SubmissionRecord& record);

  std::vector<SubmissionRecord> load(const RecordFilter& filter = {}) const;
  // Snapshot in append order.
  std::vector<SubmissionRecord> snapshot() const;
  std::size_t size() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::vector<SubmissionRecord> records_;
};

// Reads a log file. Blank lines are skipped. Throws Error("IO") or
// Error("INVALID_RECORD") naming the line.
std::vector<SubmissionRecord> load_log(const std::filesystem::path& path);
void write_log(const std::filesystem::path& path, const std::vector<SubmissionRecord>& records);

enum class DropReason { kOverMax, kAfterCorrect, kDuplicateAttempt, kNonSequential };
std::string_view to_string(DropReason r);

struct CleanLog {
  std::vector<SubmissionRecord> records;
  std::map<DropReason, std::size_t> provenance;

  std::size_t dropped() const;
};

// Drops, per (student, question) in (received_at, attempts) order: attempts
// above max_attempts; everything after the first CORRECT; repeats of an
// attempt number already kept; and attempts that would leave a gap. Survivors
// keep their input order.
CleanLog clean(const std::vector<SubmissionRecord>& raw, int max_attempts = 4);

// Empty when the log satisfies every clean-log invariant; otherwise one
// message per violation.
std::vector<std::string> verify_clean_log(const std::vector<SubmissionRecord>& records,
                                          int max_attempts = 4);

}  // namespace geograde

#endif  // GEOGRADE_DATASTORE_H_
