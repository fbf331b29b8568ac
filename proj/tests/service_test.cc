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

#include "geograde/service.h"

#include <chrono>
#include <thread>

#include <gtest/gtest.h>

#include "constructions.h"
#include "geograde/http_server.h"
#include "httplib.h"
#include "json.hpp"

namespace geograde {
namespace {

using nlohmann::json;

const QuestionBank& bank() {
  static const QuestionBank kBank = QuestionBank::load(testing::bank_dir());
  return kBank;
}

// Slow correctness decisions; feedback requests echo a fixed line.
class SlowBackend final : public JudgeBackend {
 public:
  explicit SlowBackend(bool fail = false) : fail_(fail) {}
  JudgeDecision judge_correctness(const PromptDocument&) const override {
    if (fail_) throw JudgeError(JudgeErrc::kTimeout, 3, "judge timed out");
    std::this_thread::sleep_for(std::chrono::milliseconds(15));
    return {false, R"({"correct":false})"};
  }
  std::string generate_feedback_text(const PromptDocument&) const override { return "Check each step."; }

 private:
  bool fail_;
};

struct Fixture {
  explicit Fixture(const std::string& name, JudgeHandle judge = JudgeHandle::stub(),
                   std::size_t cap = 4)
      : dir(testing::scratch_dir(name)) {
    store = std::make_shared<SubmissionStore>(dir / "log.ndjson");
    AssessmentService::Options opt;
    opt.judge_call_cap = cap;
    opt.retry_after_s = 7;
    opt.clock = [n = std::make_shared<std::int64_t>(0)] { return ++*n; };
    service = std::make_unique<AssessmentService>(bank(), store, judge, opt);
  }
  ~Fixture() {
    service.reset();
    store.reset();
    std::filesystem::remove_all(dir);
  }

  std::filesystem::path dir;
  std::shared_ptr<SubmissionStore> store;
  std::unique_ptr<AssessmentService> service;
};

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.code();
  }
  return "";
}

TEST(ServiceTest, AssignsAttemptsAndLocksAfterCorrect) {
  Fixture fx("svc_correct");
  auto& svc = *fx.service;
  const auto r1 = svc.handle_submission("S1", "Q1", "incenter");
  EXPECT_EQ(r1.verdict.status, Correctness::kIncorrect);
  EXPECT_EQ(r1.attempt, 1);
  EXPECT_EQ(r1.attempts_remaining, 3);
  EXPECT_FALSE(r1.locked);
  EXPECT_FALSE(r1.feedback_text.empty());
  const auto r2 = svc.handle_submission("S1", "Q1", "the circumcenter");
  EXPECT_EQ(r2.verdict.status, Correctness::kCorrect);
  EXPECT_EQ(r2.attempt, 2);
  EXPECT_EQ(r2.stage, FeedbackStage::kPraise);
  EXPECT_TRUE(r2.locked);
  EXPECT_EQ(code_of([&] { svc.handle_submission("S1", "Q1", "circumcenter"); }), "ITEM_LOCKED");
  EXPECT_EQ(svc.handle_submission("S2", "Q1", "circumcenter").attempt, 1);
  EXPECT_EQ(fx.store->size(), 3u);
}

TEST(ServiceTest, LocksAfterLastAttempt) {
  Fixture fx("svc_exhaust");
  auto& svc = *fx.service;
  const auto& wrong = testing::bank_constructions().at("Q4").incorrect.raw_text;
  for (int k = 1; k <= 4; ++k) {
    const auto r = svc.handle_submission("S1", "Q4", wrong);
    EXPECT_EQ(r.attempt, k);
    EXPECT_EQ(r.locked, k == 4);
  }
  EXPECT_EQ(code_of([&] { svc.handle_submission("S1", "Q4", wrong); }), "ITEM_LOCKED");
  EXPECT_TRUE(verify_clean_log(fx.store->snapshot(), 4).empty());
}

TEST(ServiceTest, GradesConstructions) {
  Fixture fx("svc_cgt");
  const auto r = fx.service->handle_submission("S1", "Q4", testing::bank_constructions().at("Q4").correct.raw_text);
  EXPECT_EQ(r.verdict.status, Correctness::kCorrect);
}

TEST(ServiceTest, RejectsBadRequests) {
  Fixture fx("svc_bad");
  auto& svc = *fx.service;
  EXPECT_EQ(code_of([&] { svc.handle_submission("S1", "Q99", "x"); }), "UNKNOWN_QUESTION");
  EXPECT_EQ(code_of([&] { svc.handle_submission("S1", "Q1", "  \n"); }), "MALFORMED_PAYLOAD");
  EXPECT_EQ(code_of([&] { svc.handle_submission("", "Q1", "x"); }), "MALFORMED_PAYLOAD");
  EXPECT_EQ(fx.store->size(), 0u);
}

TEST(ServiceTest, HistoryIsPerStudent) {
  Fixture fx("svc_history");
  auto& svc = *fx.service;
  svc.handle_submission("S1", "Q1", "incenter");
  svc.handle_submission("S1", "Q2", "3");
  svc.handle_submission("S2", "Q1", "incenter");
  const auto h = svc.history("S1");
  ASSERT_EQ(h.size(), 2u);
  for (const auto& r : h) EXPECT_EQ(r.student_id(), "S1");
  EXPECT_TRUE(svc.history("S9").empty());
}

TEST(ServiceTest, RestartResumesCounters) {
  const auto dir = testing::scratch_dir("svc_restart");
  const auto path = dir / "log.ndjson";
  {
    AssessmentService svc(bank(), std::make_shared<SubmissionStore>(path), JudgeHandle::stub(), {});
    svc.handle_submission("S1", "Q1", "incenter");
    svc.handle_submission("S1", "Q1", "orthocenter");
    svc.handle_submission("S2", "Q2", "3");
  }
  AssessmentService svc(bank(), std::make_shared<SubmissionStore>(path), JudgeHandle::stub(), {});
  EXPECT_EQ(svc.handle_submission("S1", "Q1", "centroid").attempt, 3);
  EXPECT_EQ(code_of([&] { svc.handle_submission("S2", "Q2", "3"); }), "ITEM_LOCKED");
  std::filesystem::remove_all(dir);
}

TEST(ServiceTest, RejectsAttemptCapBelowBank) {
  AssessmentService::Options opt;
  opt.max_attempts = 2;
  const auto dir = testing::scratch_dir("svc_cap");
  EXPECT_THROW(AssessmentService(bank(), std::make_shared<SubmissionStore>(dir / "log.ndjson"),
                                 JudgeHandle::stub(), opt),
               Error);
  std::filesystem::remove_all(dir);
}

TEST(ServiceTest, JudgeFailureIsRetryable) {
  Fixture fx("svc_down", JudgeHandle::from_backend(std::make_shared<SlowBackend>(true)));
  try {
    fx.service->handle_submission("S1", "Q3", "The circumcenter is equidistant.");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.code(), "JUDGE_UNAVAILABLE");
    EXPECT_EQ(e.retry_after_s(), 7);
  }
  EXPECT_EQ(fx.store->size(), 0u);
  // The failed attempt is not counted.
  EXPECT_EQ(fx.service->handle_submission("S1", "Q1", "incenter").attempt, 1);
}

TEST(ServiceTest, ConcurrentJudgeCallsStayUnderCap) {
  Fixture fx("svc_cap_gate", JudgeHandle::from_backend(std::make_shared<SlowBackend>()), 2);
  auto& svc = *fx.service;
  std::vector<std::thread> workers;
  for (int s = 0; s < 12; ++s) {
    workers.emplace_back([&svc, s] {
      for (int k = 0; k < 2; ++k) svc.handle_submission("S" + std::to_string(s), "Q3", "a guess");
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(fx.store->size(), 24u);
  EXPECT_LE(svc.judge_gate().peak(), 2u);
  EXPECT_GE(svc.judge_gate().peak(), 1u);
  EXPECT_EQ(svc.judge_gate().in_flight(), 0u);
  EXPECT_TRUE(verify_clean_log(fx.store->snapshot(), 4).empty());
}

TEST(ServiceTest, SamePairIsSerialized) {
  Fixture fx("svc_pair");
  auto& svc = *fx.service;
  std::vector<std::thread> workers;
  std::atomic<int> locked{0};
  for (int i = 0; i < 8; ++i) {
    workers.emplace_back([&] {
      try {
        svc.handle_submission("S1", "Q2", "4");
      } catch (const ServiceError& e) {
        if (e.code() == "ITEM_LOCKED") ++locked;
      }
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(fx.store->size(), 4u);
  EXPECT_EQ(locked, 4);
  EXPECT_TRUE(verify_clean_log(fx.store->snapshot(), 4).empty());
}

TEST(ServiceTest, WritesReport) {
  Fixture fx("svc_report");
  fx.service->handle_submission("S1", "Q1", "circumcenter");
  fx.service->handle_submission("S2", "Q1", "incenter");
  const auto files = fx.service->write_report(fx.dir / "report");
  EXPECT_FALSE(files.empty());
  for (const auto& p : files) EXPECT_TRUE(std::filesystem::exists(p)) << p;
}

TEST(ServiceConfigTest, ShippedConfigs) {
  const auto stub = load_service_config(testing::data_dir() / "service.json");
  EXPECT_FALSE(stub.judge);
  EXPECT_EQ(stub.bank_path, testing::data_dir() / "bank");
  EXPECT_EQ(stub.judge_call_cap, 4u);
  EXPECT_EQ(stub.feedback.max_chars, 100u);
  const auto remote = load_service_config(testing::data_dir() / "service_remote.json");
  ASSERT_TRUE(remote.judge);
  EXPECT_EQ(remote.judge->base_url, "https://judge.example.org");
  EXPECT_EQ(remote.judge->max_retries, 2);
  EXPECT_NE(remote.judge->parameters_json.find("temperature"), std::string::npos);
}

TEST(ServiceConfigTest, RejectsInvalid) {
  EXPECT_THROW(service_config_from_json("[]"), Error);
  EXPECT_THROW(service_config_from_json(R"({"bank": "b", "store": "s", "judge_call_cap": 0})"), Error);
  // Parsing accepts a zero timeout; validation at startup rejects it.
  const auto zero = service_config_from_json(
      R"({"bank": "bank", "store": "log.ndjson", "judge": {"base_url": "http://x", "model": "m", "timeout_ms": 0}})",
      testing::data_dir());
  EXPECT_THROW(zero.validate(), Error);
}

class HttpServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    fx_ = std::make_unique<Fixture>("svc_http");
    server_ = std::make_unique<HttpServer>(*fx_->service);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 100 && !client_->Get("/v1/questions"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
    server_.reset();
    fx_.reset();
  }

  httplib::Result submit(const json& body, const httplib::Headers& headers = {}) {
    return client_->Post("/v1/submissions", headers, body.dump(), "application/json");
  }

  std::unique_ptr<Fixture> fx_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpServerTest, SubmissionRoundTrip) {
  auto res = submit({{"student_id", "S1"}, {"question_id", "Q1"}, {"answer", "incenter"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto body = json::parse(res->body);
  EXPECT_EQ(body["verdict"], "INCORRECT");
  EXPECT_EQ(body["attempt"], 1);
  EXPECT_EQ(body["attempts_remaining"], 3);
  EXPECT_FALSE(body["locked"].get<bool>());

  res = submit({{"question_id", "Q1"}, {"answer", "circumcenter"}}, {{"X-Student-Id", "S1"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["attempt"], 2);

  res = client_->Get("/v1/students/S1/history");
  ASSERT_TRUE(res);
  const auto history = json::parse(res->body);
  ASSERT_EQ(history.size(), 2u);
  EXPECT_EQ(history[1]["answer_status"], "CORRECT");
}

TEST_F(HttpServerTest, ErrorBodies) {
  auto res = submit({{"student_id", "S1"}, {"question_id", "Q99"}, {"answer", "x"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["code"], "UNKNOWN_QUESTION");

  res = client_->Post("/v1/submissions", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["code"], "MALFORMED_PAYLOAD");

  res = submit({{"student_id", "S1"}, {"question_id", "Q2"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["code"], "MALFORMED_PAYLOAD");

  submit({{"student_id", "S1"}, {"question_id", "Q2"}, {"answer", "3"}});
  res = submit({{"student_id", "S1"}, {"question_id", "Q2"}, {"answer", "3"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["code"], "ITEM_LOCKED");
}

TEST_F(HttpServerTest, QuestionsAndReport) {
  auto res = client_->Get("/v1/questions");
  ASSERT_TRUE(res);
  const auto questions = json::parse(res->body);
  ASSERT_EQ(questions.size(), 18u);
  EXPECT_EQ(questions[0]["question_id"], "Q1");
  for (const auto& q : questions) EXPECT_FALSE(q.contains("answer_key"));

  submit({{"student_id", "S1"}, {"question_id", "Q1"}, {"answer", "circumcenter"}});
  const auto out = fx_->dir / "report";
  res = client_->Post("/v1/admin/report", json{{"out_dir", out.string()}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_FALSE(json::parse(res->body)["files"].empty());
  EXPECT_TRUE(std::filesystem::exists(out / "difficulty.csv"));
}

TEST(HttpServerRetryTest, JudgeUnavailableCarriesRetryAfter) {
  Fixture fx("svc_http_down", JudgeHandle::from_backend(std::make_shared<SlowBackend>(true)));
  HttpServer server(*fx.service);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100; ++i) {
    res = client.Post("/v1/submissions", R"({"student_id":"S1","question_id":"Q3","answer":"x"})",
                      "application/json");
    if (res) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 503);
  EXPECT_EQ(res->get_header_value("Retry-After"), "7");
  const auto body = json::parse(res->body);
  EXPECT_EQ(body["code"], "JUDGE_UNAVAILABLE");
  EXPECT_EQ(body["retry_after"], 7);
  server.stop();
  t.join();
}

}  // namespace
}  // namespace geograde
