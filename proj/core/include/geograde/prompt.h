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

#ifndef GEOGRADE_PROMPT_H_
#define GEOGRADE_PROMPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace geograde {

// A prompt is an ordered list of named sections. The rendered form is
// line-oriented:
//
//   @@begin exemplar index=1 judgment=CORRECT
//   free text ...
//   @@end exemplar
//
// Body lines that begin with '@' or a backslash get a backslash prepended, so no body
// line can be mistaken for a delimiter. Attribute values are
// percent-encoded. render() and parse() are exact inverses.
struct PromptSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string body;

  std::optional<std::string> attr(std::string_view key) const;

  friend bool operator==(const PromptSection&, const PromptSection&) = default;
};

class PromptDocument {
 public:
  PromptDocument& add(PromptSection section);
  PromptDocument& add(std::string name, std::string body,
                      std::vector<std::pair<std::string, std::string>> attrs = {});

  const std::vector<PromptSection>& sections() const noexcept { return sections_; }

  // First section with this name, or nullptr.
  const PromptSection* find(std::string_view name) const;
  std::vector<const PromptSection*> find_all(std::string_view name) const;

  std::string render() const;
  // Throws Error("PROMPT_SYNTAX") on malformed text.
  static PromptDocument parse(std::string_view text);

  friend bool operator==(const PromptDocument&, const PromptDocument&) = default;

 private:
  std::vector<PromptSection> sections_;
};

}  // namespace geograde

#endif  // GEOGRADE_PROMPT_H_
