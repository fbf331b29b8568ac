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

#ifndef GEOGRADE_REPORT_H_
#define GEOGRADE_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geograde/analytics.h"

namespace geograde {

enum class ReportFormat { kCsv, kSvgPlots };

// Writes one file per statistic family into out_dir (created if missing) and
// returns the paths in write order. Output bytes depend only on the report.
// Throws Error("IO").
std::vector<std::filesystem::path> emit_report(const PsychometricReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir);

// numerator / denominator rounded half to even at three decimals, computed
// exactly. "UNDEFINED" for a zero denominator.
std::string format_rate(const Rate& r);
std::string format_rate(std::int64_t numerator, std::int64_t denominator);
// Three decimals, ties to even on the binary value.
std::string format_fixed3(double v);

}  // namespace geograde

#endif  // GEOGRADE_REPORT_H_
