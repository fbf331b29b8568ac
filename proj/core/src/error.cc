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

#include "geograde/error.h"

namespace geograde {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

std::string_view to_string(Correctness c) {
  return c == Correctness::kCorrect ? "CORRECT" : "INCORRECT";
}

Correctness correctness_from_string(std::string_view s) {
  if (s == "CORRECT") return Correctness::kCorrect;
  if (s == "INCORRECT") return Correctness::kIncorrect;
  throw Error("BAD_VALUE", "expected CORRECT or INCORRECT, got '" +
                               std::string(s) + "'");
}

}  // namespace geograde
