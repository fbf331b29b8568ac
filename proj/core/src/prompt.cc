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

#include "geograde/prompt.h"

#include <cstdio>

#include "geograde/error.h"

namespace geograde {
namespace {

constexpr std::string_view kBegin = "@@begin ";
constexpr std::string_view kEnd = "@@end ";

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-';
}

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_token_char(c)) return false;
  }
  return true;
}

std::string percent_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (is_token_char(static_cast<char>(c)) || c == '.' || c == ',') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) {
      throw Error("PROMPT_SYNTAX", "truncated percent escape");
    }
    const int hi = hex_value(s[i + 1]);
    const int lo = hex_value(s[i + 2]);
    if (hi < 0 || lo < 0) throw Error("PROMPT_SYNTAX", "bad percent escape");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::optional<std::string> PromptSection::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs) {
    if (k == key) return v;
  }
  return std::nullopt;
}

PromptDocument& PromptDocument::add(PromptSection section) {
  if (!valid_token(section.name)) throw Error("PROMPT_SYNTAX", "invalid section name");
  for (const auto& [k, v] : section.attrs) {
    (void)v;
    if (!valid_token(k)) throw Error("PROMPT_SYNTAX", "invalid attribute key");
  }
  sections_.push_back(std::move(section));
  return *this;
}

PromptDocument& PromptDocument::add(std::string name, std::string body,
                                    std::vector<std::pair<std::string, std::string>> attrs) {
  return add(PromptSection{std::move(name), std::move(attrs), std::move(body)});
}

const PromptSection* PromptDocument::find(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const PromptSection*> PromptDocument::find_all(std::string_view name) const {
  std::vector<const PromptSection*> out;
  for (const auto& s : sections_) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

std::string PromptDocument::render() const {
  std::string out;
  for (const auto& s : sections_) {
    out += kBegin;
    out += s.name;
    for (const auto& [k, v] : s.attrs) {
      out += ' ';
      out += k;
      out += '=';
      out += percent_encode(v);
    }
    out += '\n';
    for (std::string_view line : split_lines(s.body)) {
      if (!line.empty() && (line[0] == '@' || line[0] == '\\')) out += '\\';
      out += line;
      out += '\n';
    }
    out += kEnd;
    out += s.name;
    out += '\n';
  }
  return out;
}

PromptDocument PromptDocument::parse(std::string_view text) {
  PromptDocument doc;
  std::vector<std::string_view> lines = split_lines(text);
  // render() terminates every line, leaving one empty trailing piece.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view header = lines[i];
    if (header.substr(0, kBegin.size()) != kBegin) {
      throw Error("PROMPT_SYNTAX", "expected a section header at line " + std::to_string(i + 1));
    }
    header.remove_prefix(kBegin.size());
    PromptSection section;
    std::size_t pos = 0;
    bool first = true;
    while (pos <= header.size()) {
      std::size_t sp = header.find(' ', pos);
      if (sp == std::string_view::npos) sp = header.size();
      std::string_view word = header.substr(pos, sp - pos);
      if (first) {
        section.name = std::string(word);
        first = false;
      } else {
        const std::size_t eq = word.find('=');
        if (eq == std::string_view::npos) throw Error("PROMPT_SYNTAX", "attribute without '='");
        section.attrs.emplace_back(std::string(word.substr(0, eq)),
                                   percent_decode(word.substr(eq + 1)));
      }
      pos = sp + 1;
    }
    const std::string end_line = std::string(kEnd) + section.name;
    ++i;
    std::string body;
    bool closed = false;
    bool first_line = true;
    for (; i < lines.size(); ++i) {
      std::string_view line = lines[i];
      if (line == end_line) {
        closed = true;
        ++i;
        break;
      }
      if (!line.empty() && line[0] == '@') {
        throw Error("PROMPT_SYNTAX", "unescaped '@' in section '" + section.name + "'");
      }
      if (!line.empty() && line[0] == '\\') line.remove_prefix(1);
      if (!first_line) body += '\n';
      body += line;
      first_line = false;
    }
    if (!closed) throw Error("PROMPT_SYNTAX", "section '" + section.name + "' is not closed");
    section.body = std::move(body);
    doc.add(std::move(section));
  }
  return doc;
}

}  // namespace geograde
