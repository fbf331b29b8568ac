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

#include "geograde/synonyms.h"

#include <algorithm>

#include "geograde/error.h"
#include "json_util.h"

namespace geograde {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c >= 0x80;
}

bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?' || c == ';'; }

std::string join(const std::vector<std::string>& tokens, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += ' ';
    out += tokens[i];
  }
  return out;
}

// Sentences of text, split on terminal punctuation.
std::vector<std::string_view> sentences(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_sentence_end(text[i])) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

SynonymTable SynonymTable::defaults() {
  SynonymTable t;
  const std::pair<const char*, const char*> entries[] = {
      {"circumcentre", "circumcenter"},
      {"center of the circumscribed circle", "circumcenter"},
      {"centre of the circumscribed circle", "circumcenter"},
      {"center of the circumcircle", "circumcenter"},
      {"circumscribed circle", "circumcircle"},
      {"vertices", "vertex"},
      {"vertexes", "vertex"},
      {"corner", "vertex"},
      {"corners", "vertex"},
      {"perpendicular bisector", "perpendicular_bisector"},
      {"perpendicular bisectors", "perpendicular_bisector"},
      {"equal distance", "equidistant"},
      {"equal distances", "equidistant"},
      {"same distance", "equidistant"},
      {"equally distant", "equidistant"},
      {"equally far", "equidistant"},
      {"distances", "distance"},
      {"intersect", "intersection"},
      {"intersects", "intersection"},
      {"intersecting", "intersection"},
      {"intersections", "intersection"},
      {"meet", "intersection"},
      {"meets", "intersection"},
      {"meet at", "intersection"},
      {"cross", "intersection"},
      {"3", "three"},
      {"exterior", "outside"},
      {"outer", "outside"},
      {"within", "inside"},
      {"in the interior", "inside"},
      {"middle point", "midpoint"},
      {"mid point", "midpoint"},
      {"midpoints", "midpoint"},
      {"radii", "radius"},
      {"end point", "endpoint"},
      {"end points", "endpoint"},
      {"endpoints", "endpoint"},
      {"longest side", "hypotenuse"},
  };
  for (const auto& [phrase, canonical] : entries) t.add(phrase, canonical);
  t.add_gap_pattern("distance", "equal", "equidistant");
  t.add_gap_pattern("distance", "same", "equidistant");
  t.add_gap_pattern("equal", "distance", "equidistant");
  return t;
}

SynonymTable SynonymTable::from_json(std::string_view text) {
  const detail::Json doc = detail::parse_json(text, "SYNONYMS");
  if (!doc.is_object()) throw Error("SYNONYMS", "synonym file must be an object");
  SynonymTable t;
  if (auto it = doc.find("synonyms"); it != doc.end()) {
    if (!it->is_object()) throw Error("SYNONYMS", "'synonyms' must be an object");
    for (const auto& [phrase, canonical] : it->items()) {
      if (!canonical.is_string()) throw Error("SYNONYMS", "synonym targets must be strings");
      t.add(phrase, canonical.get<std::string>());
    }
  }
  if (auto it = doc.find("gap_patterns"); it != doc.end()) {
    if (!it->is_array()) throw Error("SYNONYMS", "'gap_patterns' must be an array");
    for (const auto& g : *it) {
      if (!g.is_array() || g.size() != 3 || !g[0].is_string() || !g[1].is_string() ||
          !g[2].is_string()) {
        throw Error("SYNONYMS", "each gap pattern is [first, second, concept]");
      }
      t.add_gap_pattern(g[0].get<std::string>(), g[1].get<std::string>(), g[2].get<std::string>());
    }
  }
  const auto bad = t.idempotence_violations();
  if (!bad.empty()) throw Error("SYNONYMS", "canonical token is not a fixed point: " + bad.front());
  return t;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  return from_json(detail::read_file(path));
}

void SynonymTable::add(std::string_view phrase, std::string_view canonical) {
  const auto tokens = tokenize(phrase);
  const auto target = tokenize(canonical);
  if (tokens.empty() || target.size() != 1) {
    throw Error("SYNONYMS", "synonym '" + std::string(phrase) +
                                "' needs a non-empty phrase and a single-token target");
  }
  entries_[join(tokens, 0, tokens.size())] = target.front();
  longest_ = std::max(longest_, tokens.size());
}

void SynonymTable::add_gap_pattern(std::string first, std::string second,
                                   std::string concept_token) {
  gaps_.push_back({std::move(first), std::move(second), std::move(concept_token)});
}

// Rewriting can form a new phrase ("same distances" becomes "same distance"),
// so passes repeat until nothing changes. Each pass either shortens the
// sequence or leaves it fixed, since every target is a fixed point.
std::vector<std::string> SynonymTable::canonical_sequence(std::string_view text) const {
  std::vector<std::string> tokens = tokenize(text);
  for (;;) {
    std::vector<std::string> next = rewrite_once(tokens);
    if (next == tokens) return next;
    tokens = std::move(next);
  }
}

std::vector<std::string> SynonymTable::rewrite_once(const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    const std::size_t max_len = std::min(longest_, tokens.size() - i);
    for (std::size_t len = max_len; len >= 1; --len) {
      auto it = entries_.find(join(tokens, i, i + len));
      if (it != entries_.end()) {
        out.push_back(it->second);
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(tokens[i++]);
  }
  return out;
}

std::string SynonymTable::canonicalize(std::string_view text) const {
  const auto seq = canonical_sequence(text);
  return join(seq, 0, seq.size());
}

std::set<std::string> SynonymTable::concept_set(std::string_view text) const {
  std::set<std::string> out;
  for (std::string_view sentence : sentences(text)) {
    const auto seq = canonical_sequence(sentence);
    out.insert(seq.begin(), seq.end());
    for (const auto& g : gaps_) {
      auto first = std::find(seq.begin(), seq.end(), g.first);
      if (first != seq.end() && std::find(first + 1, seq.end(), g.second) != seq.end()) {
        out.insert(g.concept_token);
      }
    }
  }
  return out;
}

bool SynonymTable::contains_phrase(std::string_view text, std::string_view phrase) const {
  const auto hay = canonical_sequence(text);
  const auto needle = canonical_sequence(phrase);
  if (needle.empty()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::vector<std::string> SynonymTable::idempotence_violations() const {
  std::vector<std::string> bad;
  for (const auto& [phrase, canonical] : entries_) {
    if (canonicalize(canonical) != canonical) bad.push_back(canonical);
    const std::string once = canonicalize(phrase);
    if (canonicalize(once) != once) bad.push_back(phrase);
  }
  return bad;
}

}  // namespace geograde
