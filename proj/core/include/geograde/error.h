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

#ifndef GEOGRADE_ERROR_H_
#define GEOGRADE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace geograde {

// Base class for every error raised by the library. `code()` is the stable,
// machine-readable name of the failure (for example "DANGLING_REF"); the
// what() string is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Shared by grading, datastore and analytics.
enum class Correctness { kCorrect, kIncorrect };

std::string_view to_string(Correctness c);
Correctness correctness_from_string(std::string_view s);

}  // namespace geograde

#endif  // GEOGRADE_ERROR_H_
