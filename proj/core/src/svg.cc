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

#include "svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json_util.h"

namespace geograde::detail {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double map_y(double v, double lo, double hi) {
  const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  return kPlotTop + (1.0 - t) * kPlotHeight;
}

double map_x(double v, double lo, double hi) {
  const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  return kPlotLeft + t * kPlotWidth;
}

std::string open_svg(const std::string& title) {
  const double w = kPlotLeft + kPlotWidth + 90.0;
  const double h = kPlotTop + kPlotHeight + 60.0;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<title>" + escape(title) + "</title>\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kPlotLeft) + "\" y=\"18\" font-size=\"14\">" + escape(title) + "</text>\n";
}

std::string axes(double y_lo, double y_hi) {
  std::string s;
  const double bottom = kPlotTop + kPlotHeight;
  s += "<line x1=\"" + num(kPlotLeft) + "\" y1=\"" + num(kPlotTop) + "\" x2=\"" + num(kPlotLeft) +
       "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kPlotLeft) + "\" y1=\"" + num(bottom) + "\" x2=\"" +
       num(kPlotLeft + kPlotWidth) + "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    const double y = map_y(v, y_lo, y_hi);
    s += "<line x1=\"" + num(kPlotLeft - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
         num(kPlotLeft + kPlotWidth) + "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + num(kPlotLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
         num(v).substr(0, num(v).size() - 1) + "</text>\n";
  }
  return s;
}

}  // namespace

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, double y_min, double y_max) {
  std::string s = open_svg(title) + axes(y_min, y_max);
  const double slot = labels.empty() ? kPlotWidth : kPlotWidth / static_cast<double>(labels.size());
  const double zero = map_y(std::max(y_min, 0.0), y_min, y_max);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kPlotLeft + slot * static_cast<double>(i) + slot * 0.15;
    const double y = map_y(values[i], y_min, y_max);
    const double top = std::min(y, zero);
    const double height = std::abs(zero - y);
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(top) + "\" width=\"" + num(slot * 0.7) +
         "\" height=\"" + num(height) + "\" fill=\"" + kPalette[0] + "\" data-label=\"" +
         escape(labels[i]) + "\" data-value=\"" + format_real(values[i]) + "\"/>\n";
    s += "<text x=\"" + num(x + slot * 0.35) + "\" y=\"" + num(kPlotTop + kPlotHeight + 16) +
         "\" text-anchor=\"middle\">" + escape(labels[i]) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string scatter_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<std::string>& labels,
                          const std::vector<std::pair<double, double>>& points,
                          std::pair<double, double> x_range, std::pair<double, double> y_range) {
  std::string s = open_svg(title) + axes(y_range.first, y_range.second);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = map_x(points[i].first, x_range.first, x_range.second);
    const double y = map_y(points[i].second, y_range.first, y_range.second);
    s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"4\" fill=\"" + kPalette[0] +
         "\" data-label=\"" + escape(labels[i]) + "\"/>\n";
    s += "<text x=\"" + num(x + 6) + "\" y=\"" + num(y - 6) + "\">" + escape(labels[i]) + "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = x_range.first + (x_range.second - x_range.first) * i / 4.0;
    s += "<text x=\"" + num(map_x(v, x_range.first, x_range.second)) + "\" y=\"" +
         num(kPlotTop + kPlotHeight + 16) + "\" text-anchor=\"middle\">" + num(v) + "</text>\n";
  }
  s += "<text x=\"" + num(kPlotLeft + kPlotWidth / 2) + "\" y=\"" + num(kPlotTop + kPlotHeight + 40) +
       "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num(kPlotTop + kPlotHeight / 2) + "\" transform=\"rotate(-90 14 " +
       num(kPlotTop + kPlotHeight / 2) + ")\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
  return s + "</svg>\n";
}

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::vector<Series>& series) {
  std::string s = open_svg(title) + axes(0.0, 1.0);
  std::size_t n = 0;
  for (const auto& ser : series) n = std::max(n, ser.values.size());
  const double x_hi = n > 1 ? static_cast<double>(n) : 2.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& ser = series[i];
    const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    std::string points;
    std::string values;
    for (std::size_t k = 0; k < ser.values.size(); ++k) {
      const double x = map_x(static_cast<double>(k + 1), 1.0, x_hi);
      const double y = map_y(ser.values[k], 0.0, 1.0);
      points += (k ? " " : "") + num(x) + "," + num(y);
      values += (k ? " " : "") + format_real(ser.values[k]);
    }
    const bool aggregate = ser.name == "aggregate";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(aggregate ? "black" : color) +
         "\" stroke-width=\"" + (aggregate ? "3" : "1.5") + "\" data-series=\"" + escape(ser.name) +
         "\" data-values=\"" + values + "\" points=\"" + points + "\"/>\n";
    s += "<text x=\"" + num(kPlotLeft + kPlotWidth + 4) + "\" y=\"" +
         num(kPlotTop + 12.0 * static_cast<double>(i + 1)) + "\" fill=\"" +
         (aggregate ? "black" : color) + "\" font-size=\"9\">" + escape(ser.name) + "</text>\n";
  }
  for (std::size_t k = 1; k <= n; ++k) {
    s += "<text x=\"" + num(map_x(static_cast<double>(k), 1.0, x_hi)) + "\" y=\"" +
         num(kPlotTop + kPlotHeight + 16) + "\" text-anchor=\"middle\">" + std::to_string(k) +
         "</text>\n";
  }
  s += "<text x=\"" + num(kPlotLeft + kPlotWidth / 2) + "\" y=\"" + num(kPlotTop + kPlotHeight + 40) +
       "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  return s + "</svg>\n";
}

}  // namespace geograde::detail
