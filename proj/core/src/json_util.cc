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

#include "json_util.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "geograde/error.h"

namespace geograde::detail {

namespace {

// Builds the document like the default parser but records the first error
// instead of throwing, which keeps rejection of bad input cheap.
class RecordingSax {
 public:
  explicit RecordingSax(Json& root) : dom_(root, false) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(Json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(Json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(Json::number_float_t v, const Json::string_t& s) { return dom_.number_float(v, s); }
  bool string(Json::string_t& s) { return dom_.string(s); }
  bool binary(Json::binary_t& b) { return dom_.binary(b); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(Json::string_t& k) { return dom_.key(k); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& token, const nlohmann::detail::exception& e) {
    message = e.what();
    return dom_.parse_error(pos, token, e);
  }

  std::string message;

 private:
  nlohmann::detail::json_sax_dom_parser<Json> dom_;
};

}  // namespace

std::optional<Json> try_parse_json(std::string_view text, std::string* error, std::size_t max_depth) {
  // Reject pathological nesting before handing the text to a recursive parser.
  std::size_t depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char ch : text) {
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '[' || ch == '{') {
      if (++depth > max_depth) {
        *error = "document nested too deeply";
        return std::nullopt;
      }
    } else if ((ch == ']' || ch == '}') && depth > 0) {
      --depth;
    }
  }
  Json doc;
  RecordingSax sax(doc);
  if (!Json::sax_parse(text.begin(), text.end(), &sax)) {
    *error = sax.message.empty() ? "malformed document" : sax.message;
    return std::nullopt;
  }
  return doc;
}

Json parse_json(std::string_view text, const std::string& error_code, std::size_t max_depth) {
  std::string error;
  auto doc = try_parse_json(text, &error, max_depth);
  if (!doc) throw Error(error_code, error);
  return std::move(*doc);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("IO", "cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IO", "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error("IO", "cannot write " + path.string());
}

const Json& require(const Json& obj, const char* key, const std::string& error_code) {
  if (!obj.is_object()) throw Error(error_code, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(error_code, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& error_code) {
  const Json& v = require(obj, key, error_code);
  if (!v.is_string()) throw Error(error_code, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const Json& obj, const char* key, const std::string& error_code) {
  const Json& v = require(obj, key, error_code);
  if (!v.is_number()) throw Error(error_code, std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(error_code, std::string("field '") + key + "' is not finite");
  return d;
}

long long require_integer(const Json& obj, const char* key, const std::string& error_code) {
  const Json& v = require(obj, key, error_code);
  if (!v.is_number_integer()) {
    throw Error(error_code, std::string("field '") + key + "' must be an integer");
  }
  return v.get<long long>();
}

bool require_bool(const Json& obj, const char* key, const std::string& error_code) {
  const Json& v = require(obj, key, error_code);
  if (!v.is_boolean()) throw Error(error_code, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace geograde::detail
