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

#ifndef GEOGRADE_SRC_CGT_RULES_H_
#define GEOGRADE_SRC_CGT_RULES_H_

#include <cstddef>

#include "geograde/capsule.h"
#include "geograde/grading.h"
#include "geograde/question.h"

namespace geograde::detail {

RuleOutcome evaluate_rule(const GeometrySession& session, const CgtRule& rule, std::size_t index,
                          const geometry::Tolerances& tol);

}  // namespace geograde::detail

#endif  // GEOGRADE_SRC_CGT_RULES_H_
