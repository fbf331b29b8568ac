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

#ifndef GEOGRADE_SRC_JSON_UTIL_H_
#define GEOGRADE_SRC_JSON_UTIL_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace geograde::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Throws Error(error_code) with the parser's message on malformed input or
// nesting deeper than max_depth.
Json parse_json(std::string_view text, const std::string& error_code,
                std::size_t max_depth = 64);
// Same checks without throwing: nullopt with the message in *error.
std::optional<Json> try_parse_json(std::string_view text, std::string* error,
                                   std::size_t max_depth = 64);

// Shortest form that round-trips: 17 significant digits.
std::string format_real(double v);

// Error("IO") on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Accessors that throw Error(error_code) naming the offending key.
const Json& require(const Json& obj, const char* key, const std::string& error_code);
std::string require_string(const Json& obj, const char* key, const std::string& error_code);
double require_number(const Json& obj, const char* key, const std::string& error_code);
long long require_integer(const Json& obj, const char* key, const std::string& error_code);
bool require_bool(const Json& obj, const char* key, const std::string& error_code);

}  // namespace geograde::detail

#endif  // GEOGRADE_SRC_JSON_UTIL_H_
