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

#ifndef GEOGRADE_SRC_SVG_H_
#define GEOGRADE_SRC_SVG_H_

#include <string>
#include <utility>
#include <vector>

namespace geograde::detail {

// Plot area in user units; every chart shares it so coordinates can be mapped
// back to values.
inline constexpr double kPlotLeft = 60.0;
inline constexpr double kPlotTop = 30.0;
inline constexpr double kPlotWidth = 520.0;
inline constexpr double kPlotHeight = 300.0;

struct Series {
  std::string name;
  std::vector<double> values;
};

// Bars of values in [y_min, y_max] with one label per bar.
std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, double y_min, double y_max);

// Points (x, y), both axes spanning the given ranges.
std::string scatter_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<std::string>& labels,
                          const std::vector<std::pair<double, double>>& points,
                          std::pair<double, double> x_range, std::pair<double, double> y_range);

// One polyline per series over x = 1..n on a [0, 1] y axis. Each polyline
// carries its values in a data-values attribute.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::vector<Series>& series);

}  // namespace geograde::detail

#endif  // GEOGRADE_SRC_SVG_H_
