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

#include "geograde/datastore.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "json_util.h"

namespace geograde {
namespace {

constexpr const char* kBadRecord = "INVALID_RECORD";

[[noreturn]] void throw_errno(const std::string& what, const std::filesystem::path& path) {
  const int err = errno;
  const std::string msg = what + " " + path.string() + ": " + std::strerror(err);
  if (err == ENOSPC || err == EDQUOT) throw Error("STORAGE_FULL", msg);
  throw Error("IO", msg);
}

std::vector<SubmissionRecord> parse_lines(std::string_view text, const std::string& source) {
  std::vector<SubmissionRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(SubmissionRecord::from_json_line(line));
    } catch (const Error& e) {
      throw Error(kBadRecord, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

using PairKey = std::pair<std::string, std::string>;

}  // namespace

SubmissionRecord::SubmissionRecord(std::string student_id, std::string question_id, int attempts,
                                   Correctness answer_status, std::string answer,
                                   std::string feedback, std::int64_t received_at)
    : student_id_(std::move(student_id)),
      question_id_(std::move(question_id)),
      attempts_(attempts),
      answer_status_(answer_status),
      answer_(std::move(answer)),
      feedback_(std::move(feedback)),
      received_at_(received_at) {
  if (student_id_.empty()) throw Error(kBadRecord, "student_id is empty");
  if (question_id_.empty()) throw Error(kBadRecord, "question_id is empty");
  if (attempts_ < 1) throw Error(kBadRecord, "attempts must be at least 1");
}

std::string SubmissionRecord::to_json_line() const {
  detail::OrderedJson j;
  j["student_id"] = student_id_;
  j["question_id"] = question_id_;
  j["attempts"] = attempts_;
  j["answer_status"] = std::string(to_string(answer_status_));
  j["answer"] = answer_;
  j["feedback"] = feedback_;
  j["received_at"] = received_at_;
  return j.dump();
}

SubmissionRecord SubmissionRecord::from_json_line(std::string_view line) {
  const detail::Json j = detail::parse_json(line, kBadRecord);
  if (!j.is_object()) throw Error(kBadRecord, "record must be an object");
  static const std::set<std::string> kFields = {"student_id", "question_id", "attempts",
                                                "answer_status", "answer", "feedback",
                                                "received_at"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kFields.count(it.key())) throw Error(kBadRecord, "unknown field '" + it.key() + "'");
  }
  const long long attempts = detail::require_integer(j, "attempts", kBadRecord);
  if (attempts < 1 || attempts > 1'000'000) throw Error(kBadRecord, "attempts out of range");
  Correctness status;
  try {
    status = correctness_from_string(detail::require_string(j, "answer_status", kBadRecord));
  } catch (const Error& e) {
    throw Error(kBadRecord, e.what());
  }
  return SubmissionRecord(detail::require_string(j, "student_id", kBadRecord),
                          detail::require_string(j, "question_id", kBadRecord),
                          static_cast<int>(attempts), status,
                          detail::require_string(j, "answer", kBadRecord),
                          detail::require_string(j, "feedback", kBadRecord),
                          detail::require_integer(j, "received_at", kBadRecord));
}

bool RecordFilter::matches(const SubmissionRecord& r) const {
  if (student_id && r.student_id() != *student_id) return false;
  if (question_id && r.question_id() != *question_id) return false;
  if (from && r.received_at() < *from) return false;
  if (to && r.received_at() > *to) return false;
  return true;
}

void sort_records(std::vector<SubmissionRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::forward_as_tuple(a.student_id(), a.question_id(), a.received_at(), a.attempts()) <
           std::forward_as_tuple(b.student_id(), b.question_id(), b.received_at(), b.attempts());
  });
}

SubmissionStore::SubmissionStore(std::filesystem::path path) : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw_errno("cannot open", path_);
  std::string text;
  try {
    text = detail::read_file(path_);
  } catch (...) {
    ::close(fd_);
    throw;
  }
  const std::size_t last_newline = text.rfind('\n');
  const std::size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (keep < text.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(keep)) != 0) {
      ::close(fd_);
      throw_errno("cannot truncate torn tail of", path_);
    }
    text.resize(keep);
  }
  try {
    records_ = parse_lines(text, path_.string());
  } catch (...) {
    ::close(fd_);
    throw;
  }
}

SubmissionStore::~SubmissionStore() {
  if (fd_ >= 0) ::close(fd_);
}

void SubmissionStore::append(const SubmissionRecord& record) {
  const std::string line = record.to_json_line() + "\n";
  std::lock_guard lock(mu_);
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("cannot append to", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw_errno("cannot sync", path_);
  records_.push_back(record);
}

std::vector<SubmissionRecord> SubmissionStore::load(const RecordFilter& filter) const {
  std::vector<SubmissionRecord> out;
  {
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
      if (filter.matches(r)) out.push_back(r);
    }
  }
  sort_records(out);
  return out;
}

std::vector<SubmissionRecord> SubmissionStore::snapshot() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t SubmissionStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<SubmissionRecord> load_log(const std::filesystem::path& path) {
  return parse_lines(detail::read_file(path), path.string());
}

void write_log(const std::filesystem::path& path, const std::vector<SubmissionRecord>& records) {
  std::string text;
  for (const auto& r : records) text += r.to_json_line() + "\n";
  detail::write_file(path, text);
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::kOverMax: return "OVER_MAX";
    case DropReason::kAfterCorrect: return "AFTER_CORRECT";
    case DropReason::kDuplicateAttempt: return "DUPLICATE_ATTEMPT";
    case DropReason::kNonSequential: return "NON_SEQUENTIAL";
  }
  return "UNKNOWN";
}

std::size_t CleanLog::dropped() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : provenance) n += count;
  return n;
}

CleanLog clean(const std::vector<SubmissionRecord>& raw, int max_attempts) {
  std::map<PairKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    groups[{raw[i].student_id(), raw[i].question_id()}].push_back(i);
  }
  std::vector<bool> keep(raw.size(), false);
  CleanLog out;
  for (auto r : {DropReason::kOverMax, DropReason::kAfterCorrect, DropReason::kDuplicateAttempt,
                 DropReason::kNonSequential}) {
    out.provenance[r] = 0;
  }
  for (auto& [key, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(raw[a].received_at(), raw[a].attempts()) <
             std::pair(raw[b].received_at(), raw[b].attempts());
    });
    bool seen_correct = false;
    int kept = 0;
    std::set<int> kept_attempts;
    for (std::size_t i : idx) {
      const SubmissionRecord& r = raw[i];
      if (r.attempts() > max_attempts) {
        ++out.provenance[DropReason::kOverMax];
      } else if (seen_correct) {
        ++out.provenance[DropReason::kAfterCorrect];
      } else if (kept_attempts.count(r.attempts())) {
        ++out.provenance[DropReason::kDuplicateAttempt];
      } else if (r.attempts() != kept + 1) {
        ++out.provenance[DropReason::kNonSequential];
      } else {
        keep[i] = true;
        ++kept;
        kept_attempts.insert(r.attempts());
        seen_correct = r.correct();
      }
    }
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (keep[i]) out.records.push_back(raw[i]);
  }
  return out;
}

std::vector<std::string> verify_clean_log(const std::vector<SubmissionRecord>& records,
                                          int max_attempts) {
  std::vector<std::string> problems;
  std::map<PairKey, std::vector<const SubmissionRecord*>> groups;
  for (const auto& r : records) groups[{r.student_id(), r.question_id()}].push_back(&r);
  for (auto& [key, rs] : groups) {
    const std::string pair = key.first + "/" + key.second;
    std::stable_sort(rs.begin(), rs.end(), [](const auto* a, const auto* b) {
      return std::pair(a->received_at(), a->attempts()) < std::pair(b->received_at(), b->attempts());
    });
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const int expected = static_cast<int>(i) + 1;
      if (rs[i]->attempts() != expected) {
        problems.push_back(pair + ": attempt " + std::to_string(rs[i]->attempts()) +
                           " where " + std::to_string(expected) + " was expected");
        break;
      }
      if (expected > max_attempts) {
        problems.push_back(pair + ": attempt " + std::to_string(expected) + " exceeds maximum " +
                           std::to_string(max_attempts));
        break;
      }
      if (rs[i]->correct() && i + 1 < rs.size()) {
        problems.push_back(pair + ": record after a CORRECT attempt");
        break;
      }
    }
  }
  return problems;
}

}  // namespace geograde
