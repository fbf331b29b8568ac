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

#ifndef GEOGRADE_SYNONYMS_H_
#define GEOGRADE_SYNONYMS_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace geograde {

// Co-occurrence rule: if `first` and `second` both appear (in that order)
// inside one sentence, `concept_token` is added to the concept set.
struct GapPattern {
  std::string first;
  std::string second;
  std::string concept_token;

  friend bool operator==(const GapPattern&, const GapPattern&) = default;
};

// Maps surface phrases to canonical concept tokens. Text is lowercased and
// split into word tokens ([a-z0-9_] plus any non-ASCII byte); phrases are
// then replaced greedily, longest match first.
class SynonymTable {
 public:
  SynonymTable() = default;

  // The built-in geometry vocabulary.
  static SynonymTable defaults();
  // {"synonyms": {phrase: token, ...}, "gap_patterns": [[a, b, token], ...]}
  // Throws Error("SYNONYMS") on malformed input or a non-idempotent table.
  static SynonymTable from_json(std::string_view text);
  static SynonymTable load(const std::filesystem::path& path);

  void add(std::string_view phrase, std::string_view canonical);
  void add_gap_pattern(std::string first, std::string second, std::string concept_token);

  std::vector<std::string> canonical_sequence(std::string_view text) const;
  std::string canonicalize(std::string_view text) const;
  // Canonical tokens plus gap-pattern concepts.
  std::set<std::string> concept_set(std::string_view text) const;
  // True when phrase's canonical sequence occurs contiguously in text's.
  bool contains_phrase(std::string_view text, std::string_view phrase) const;

  // Entries whose canonical form is not a fixed point of canonicalize.
  std::vector<std::string> idempotence_violations() const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<GapPattern>& gap_patterns() const noexcept { return gaps_; }

 private:
  std::vector<std::string> rewrite_once(const std::vector<std::string>& tokens) const;

  // Key: space-joined tokens of the surface phrase.
  std::map<std::string, std::string> entries_;
  std::size_t longest_ = 1;
  std::vector<GapPattern> gaps_;
};

// Lowercased word tokens, in order.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace geograde

#endif  // GEOGRADE_SYNONYMS_H_
