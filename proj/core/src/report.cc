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

#include "geograde/report.h"

#include <cmath>
#include <cstdio>
#include <system_error>

#include "json_util.h"
#include "svg.h"

namespace geograde {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string p_value(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

std::string opt_fixed3(const std::optional<double>& v) {
  return v ? format_fixed3(*v) : "UNDEFINED";
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("IO", "cannot create " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    detail::write_file(path, content);
    written_.push_back(path);
  }

  std::vector<std::filesystem::path> written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

void emit_csv(const PsychometricReport& rep, Writer& w) {
  std::string s = "question_id,first_attempt_correct,attempted,difficulty\n";
  for (const auto& q : rep.questions) {
    s += csv_field(q.question_id) + "," + std::to_string(q.difficulty.numerator) + "," +
         std::to_string(q.difficulty.denominator) + "," + format_rate(q.difficulty) + "\n";
  }
  w.write("difficulty.csv", s);

  s = "question_id,discrimination,status\n";
  for (const auto& q : rep.questions) {
    s += csv_field(q.question_id) + "," + opt_fixed3(q.discrimination) + "," +
         (q.discrimination ? "OK" : q.discrimination_error) + "\n";
  }
  w.write("discrimination.csv", s);

  if (rep.curve) {
    s = "question_id,attempt,solved,pairs,proportion\n";
    auto rows = [&s](const std::string& id, const std::array<Rate, kCurveAttempts>& rates) {
      for (int k = 0; k < kCurveAttempts; ++k) {
        s += csv_field(id) + "," + std::to_string(k + 1) + "," + std::to_string(rates[k].numerator) +
             "," + std::to_string(rates[k].denominator) + "," + format_rate(rates[k]) + "\n";
      }
    };
    for (const auto& qc : rep.curve->per_question) rows(qc.question_id, qc.solved_by);
    rows("ALL", rep.curve->aggregate);
    w.write("learning_curve.csv", s);
  }

  s = "grouping,group,converted,incorrect_with_next_attempt,rate\n";
  for (const auto& [grouping, rows] : rep.conversions) {
    for (const auto& [group, rate] : rows) {
      s += std::string(to_string(grouping)) + "," + csv_field(group) + "," +
           std::to_string(rate.numerator) + "," + std::to_string(rate.denominator) + "," +
           format_rate(rate) + "\n";
    }
  }
  w.write("conversion.csv", s);

  if (!rep.carryover.empty()) {
    s = "target,outcome,prior_yes,prior_no,none_yes,none_no,prior_rate,none_rate,p_exact,"
        "degenerate,chi2_yates,p_chi2,u_first_success,p_mann_whitney\n";
    for (const auto& c : rep.carryover) {
      auto row = [&](const char* outcome, const stats::Table2x2& t, const stats::TestResult& exact,
                     const stats::TestResult* chi2, bool with_mwu) {
        s += csv_field(c.target) + "," + outcome + "," + std::to_string(t.a) + "," +
             std::to_string(t.b) + "," + std::to_string(t.c) + "," + std::to_string(t.d) + "," +
             format_rate(t.a, t.a + t.b) + "," + format_rate(t.c, t.c + t.d) + "," +
             p_value(exact.p_value) + "," + (exact.degenerate ? "true" : "false") + ",";
        s += chi2 ? format_fixed3(chi2->statistic) + "," + p_value(chi2->p_value) : std::string(",");
        s += ",";
        s += with_mwu && c.first_success
                 ? format_fixed3(c.first_success->u) + "," + p_value(c.first_success->p_value)
                 : std::string(",");
        s += "\n";
      };
      row("eventual", c.eventual, c.eventual_exact, &c.eventual_chi2, true);
      row("first_attempt", c.first_attempt, c.first_attempt_exact, nullptr, false);
    }
    w.write("carryover.csv", s);
  }

  if (rep.agreement) {
    s = "question_id,agree,n,agreement,p_observed,p_expected,kappa\n";
    for (const auto& r : *rep.agreement) {
      s += csv_field(r.question_id) + "," + std::to_string(r.agreement.numerator) + "," +
           std::to_string(r.agreement.denominator) + "," + format_rate(r.agreement) + "," +
           format_fixed3(r.kappa.observed) + "," + format_fixed3(r.kappa.expected) + "," +
           opt_fixed3(r.kappa.kappa) + "\n";
    }
    w.write("agreement.csv", s);
  }
  if (rep.agreement_split) {
    s = "system_judgment,n,agree,rate\n";
    auto row = [&s](const char* label, const Rate& r) {
      s += std::string(label) + "," + std::to_string(r.denominator) + "," +
           std::to_string(r.numerator) + "," + format_rate(r) + "\n";
    };
    row("CORRECT", rep.agreement_split->system_correct);
    row("INCORRECT", rep.agreement_split->system_incorrect);
    w.write("agreement_by_judgment.csv", s);
  }
  if (rep.ratings) {
    s = "item,n,mean,sd\n";
    for (const auto& r : *rep.ratings) {
      s += csv_field(r.item) + "," + std::to_string(r.n) + "," + format_fixed3(r.mean) + "," +
           format_fixed3(r.sd) + "\n";
    }
    w.write("ratings.csv", s);
  }
}

void emit_svg(const PsychometricReport& rep, Writer& w) {
  std::vector<std::string> labels;
  std::vector<double> difficulty;
  for (const auto& q : rep.questions) {
    labels.push_back(q.question_id);
    difficulty.push_back(q.difficulty.value().value_or(0.0));
  }
  w.write("difficulty.svg", detail::bar_chart("Difficulty index by question", labels, difficulty, 0.0, 1.0));

  std::vector<std::string> disc_labels;
  std::vector<double> disc;
  std::vector<std::pair<double, double>> scatter;
  for (const auto& q : rep.questions) {
    if (!q.discrimination) continue;
    disc_labels.push_back(q.question_id);
    disc.push_back(*q.discrimination);
    scatter.emplace_back(q.difficulty.value().value_or(0.0), *q.discrimination);
  }
  w.write("discrimination.svg",
          detail::bar_chart("Discrimination index by question", disc_labels, disc, -1.0, 1.0));
  w.write("difficulty_vs_discrimination.svg",
          detail::scatter_chart("Difficulty versus discrimination", "difficulty", "discrimination",
                                disc_labels, scatter, {0.0, 1.0}, {-1.0, 1.0}));

  if (rep.curve) {
    std::vector<detail::Series> series;
    auto values = [](const std::array<Rate, kCurveAttempts>& rates) {
      std::vector<double> v;
      for (const auto& r : rates) v.push_back(r.value().value_or(0.0));
      return v;
    };
    for (const auto& qc : rep.curve->per_question) series.push_back({qc.question_id, values(qc.solved_by)});
    series.push_back({"aggregate", values(rep.curve->aggregate)});
    w.write("learning_curve.svg",
            detail::line_chart("Cumulative proportion solved by attempt", "attempt", series));
  }
}

}  // namespace

std::string format_rate(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) return "UNDEFINED";
  // Round numerator * 1000 / denominator half to even in integers.
  const bool negative = numerator < 0;
  const std::int64_t scaled = (negative ? -numerator : numerator) * 1000;
  std::int64_t q = scaled / denominator;
  const std::int64_t r2 = (scaled % denominator) * 2;
  if (r2 > denominator || (r2 == denominator && q % 2 == 1)) ++q;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", negative && q ? "-" : "",
                static_cast<long long>(q / 1000), static_cast<long long>(q % 1000));
  return buf;
}

std::string format_rate(const Rate& r) { return format_rate(r.numerator, r.denominator); }

std::string format_fixed3(double v) {
  if (!std::isfinite(v)) return "UNDEFINED";
  // nearbyint honours the default ties-to-even rounding mode.
  const double q = std::nearbyint(v * 1000.0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", q / 1000.0);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::vector<std::filesystem::path> emit_report(const PsychometricReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
  Writer w(out_dir);
  if (format == ReportFormat::kCsv) {
    emit_csv(report, w);
  } else {
    emit_svg(report, w);
  }
  return w.written();
}

}  // namespace geograde
