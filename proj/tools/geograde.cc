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

// geograde: command line front end for the grading service and the offline
// log pipeline.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "geograde/analytics.h"
#include "geograde/datastore.h"
#include "geograde/http_server.h"
#include "geograde/replay.h"
#include "geograde/report.h"
#include "geograde/service.h"
#include "geograde/simulate.h"

namespace {

geograde::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_provenance(const geograde::CleanLog& log, std::size_t raw) {
  std::cout << "records: " << raw << "\n";
  std::cout << "retained: " << log.records.size() << "\n";
  for (const auto& [reason, count] : log.provenance) {
    std::cout << "dropped " << geograde::to_string(reason) << ": " << count << "\n";
  }
}

int run_serve(const std::string& config_path) {
  const auto config = geograde::load_service_config(config_path);
  auto service = geograde::AssessmentService::from_config(config);
  geograde::HttpServer server(*service);
  const int port = server.bind(config.host, config.port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("listening on {}:{}", config.host, port);
  server.listen();
  g_server = nullptr;
  return 0;
}

int run_replay(const std::string& log_path, const std::string& bank_path, bool stub_judge) {
  const auto raw = geograde::load_log(log_path);
  const auto bank = geograde::QuestionBank::load(bank_path);
  std::optional<geograde::JudgeHandle> judge;
  if (stub_judge) judge = geograde::JudgeHandle::stub();
  const auto result = geograde::replay(raw, bank, judge ? &*judge : nullptr);
  print_provenance(result.clean, raw.size());
  std::cout << "regraded: " << result.regraded << "\n";
  std::cout << "skipped: " << result.skipped << "\n";
  const auto diff = result.diff();
  std::cout << "diff: " << diff.size() << "\n";
  for (const auto* e : diff) {
    std::cout << e->record.student_id() << "," << e->record.question_id() << ","
              << e->record.attempts() << "," << e->note << "\n";
  }
  return 0;
}

int run_verify(const std::string& log_path, int max_attempts) {
  const auto raw = geograde::load_log(log_path);
  const auto problems = geograde::verify_clean_log(raw, max_attempts);
  print_provenance(geograde::clean(raw, max_attempts), raw.size());
  for (const auto& p : problems) std::cout << "violation: " << p << "\n";
  std::cout << (problems.empty() ? "clean" : "not clean") << "\n";
  return problems.empty() ? 0 : 1;
}

int run_clean(const std::string& log_path, const std::string& out_path, int max_attempts) {
  const auto raw = geograde::load_log(log_path);
  const auto cleaned = geograde::clean(raw, max_attempts);
  geograde::write_log(out_path, cleaned.records);
  print_provenance(cleaned, raw.size());
  return 0;
}

struct ReportArgs {
  std::string log;
  std::string out;
  std::string judgments;
  std::string ratings;
  std::string bank;
  std::string carryover;
  std::string format = "all";
  int min_students = 50;
  int max_attempts = 4;
};

int run_report(const ReportArgs& a) {
  const auto raw = geograde::load_log(a.log);
  const auto cleaned = geograde::clean(raw, a.max_attempts);
  geograde::ReportInputs inputs;
  inputs.min_students = a.min_students;
  if (!a.bank.empty()) {
    const auto bank = geograde::QuestionBank::load(a.bank);
    inputs.types = bank.type_map();
    std::set<std::string> seen;
    for (const auto& r : cleaned.records) seen.insert(r.question_id());
    for (const auto& id : bank.presentation_order()) {
      if (seen.count(id)) inputs.question_order.push_back(id);
    }
  }
  inputs.carryover_targets = split_list(a.carryover);
  if (!a.judgments.empty()) inputs.judgments = geograde::load_judgments(a.judgments);
  if (!a.ratings.empty()) inputs.ratings = geograde::load_ratings(a.ratings);

  const auto rep = geograde::build_report(cleaned.records, inputs);
  std::vector<std::filesystem::path> files;
  if (a.format == "csv" || a.format == "all") {
    files = geograde::emit_report(rep, geograde::ReportFormat::kCsv, a.out);
  }
  if (a.format == "svg" || a.format == "all") {
    const auto svg = geograde::emit_report(rep, geograde::ReportFormat::kSvgPlots, a.out);
    files.insert(files.end(), svg.begin(), svg.end());
  }
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
  return rep.errors.empty() ? 0 : 1;
}

int run_simulate(const std::string& config_path, const std::string& out_path) {
  const auto config = geograde::load_cohort(config_path);
  const auto records = geograde::simulate(config);
  geograde::write_log(out_path, records);
  std::cout << "records: " << records.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geograde: grading service and submission-log analytics"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  std::string config_path;
  auto* serve = app.add_subcommand("serve", "Run the HTTP grading service");
  serve->add_option("--config", config_path, "Service config file")->required()->check(CLI::ExistingFile);

  std::string log_path;
  std::string bank_path;
  bool stub_judge = false;
  auto* replay = app.add_subcommand("replay", "Clean a log and re-grade its records");
  replay->add_option("log", log_path, "Submission log")->required()->check(CLI::ExistingFile);
  replay->add_option("--bank", bank_path, "Question bank file or directory")->required()->check(CLI::ExistingPath);
  replay->add_flag("--stub-judge", stub_judge, "Re-grade open answers with the offline stub judge");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Compute item statistics and write CSV and SVG files");
  report->add_option("log", report_args.log, "Submission log")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_args.out, "Output directory")->required();
  report->add_option("--judgments", report_args.judgments, "Paired system/teacher judgments")
      ->check(CLI::ExistingFile);
  report->add_option("--ratings", report_args.ratings, "Rubric scores per item")->check(CLI::ExistingFile);
  report->add_option("--bank", report_args.bank, "Question bank for order and types")
      ->check(CLI::ExistingPath);
  report->add_option("--carryover", report_args.carryover, "Comma-separated target questions");
  report->add_option("--min-students", report_args.min_students, "Learning-curve inclusion threshold");
  report->add_option("--format", report_args.format, "csv, svg or all")
      ->check(CLI::IsMember({"csv", "svg", "all"}));

  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort log");
  simulate->add_option("--config", config_path, "Cohort config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_path, "Output log")->required();

  int max_attempts = 4;
  auto* verify = app.add_subcommand("verify", "Check a log against the clean-log invariants");
  verify->add_option("log", log_path, "Submission log")->required()->check(CLI::ExistingFile);
  verify->add_option("--max-attempts", max_attempts, "Attempt budget per question");

  auto* clean = app.add_subcommand("clean", "Write the cleaned version of a log");
  clean->add_option("log", log_path, "Submission log")->required()->check(CLI::ExistingFile);
  clean->add_option("--out", out_path, "Output log")->required();
  clean->add_option("--max-attempts", max_attempts, "Attempt budget per question");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*serve) return run_serve(config_path);
    if (*replay) return run_replay(log_path, bank_path, stub_judge);
    if (*report) return run_report(report_args);
    if (*simulate) return run_simulate(config_path, out_path);
    if (*verify) return run_verify(log_path, max_attempts);
    if (*clean) return run_clean(log_path, out_path, max_attempts);
  } catch (const geograde::Error& e) {
    std::cerr << "geograde: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
