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

#include "geograde/http_server.h"

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json_util.h"

namespace geograde {
namespace {

using detail::Json;
using detail::OrderedJson;

int status_for(const std::string& code) {
  if (code == "UNKNOWN_QUESTION") return 404;
  if (code == "ITEM_LOCKED") return 409;
  if (code == "MALFORMED_PAYLOAD") return 400;
  if (code == "JUDGE_UNAVAILABLE") return 503;
  return 500;
}

void send_json(httplib::Response& res, int status, const OrderedJson& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message,
                std::optional<int> retry_after = std::nullopt) {
  OrderedJson body;
  body["code"] = code;
  body["message"] = message;
  if (retry_after) {
    body["retry_after"] = *retry_after;
    res.set_header("Retry-After", std::to_string(*retry_after));
  }
  send_json(res, status_for(code), body);
}

OrderedJson record_json(const SubmissionRecord& r) {
  return OrderedJson::parse(r.to_json_line());
}

std::string body_string(const Json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw ServiceError("MALFORMED_PAYLOAD", std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(AssessmentService& s) : service(s) {}

  AssessmentService& service;
  httplib::Server server;
};

HttpServer::HttpServer(AssessmentService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;

  srv.Post("/v1/submissions", [&svc](const httplib::Request& req, httplib::Response& res) {
    try {
      Json body;
      try {
        body = detail::parse_json(req.body, "MALFORMED_PAYLOAD");
      } catch (const Error& e) {
        throw ServiceError("MALFORMED_PAYLOAD", e.what());
      }
      if (!body.is_object()) throw ServiceError("MALFORMED_PAYLOAD", "body must be an object");
      std::string student = req.has_header("X-Student-Id") ? req.get_header_value("X-Student-Id")
                                                          : body_string(body, "student_id");
      const SubmissionResult r =
          svc.handle_submission(student, body_string(body, "question_id"), body_string(body, "answer"));
      OrderedJson out;
      out["verdict"] = std::string(to_string(r.verdict.status));
      out["feedback"] = r.feedback_text;
      out["attempt"] = r.attempt;
      out["attempts_remaining"] = r.attempts_remaining;
      out["stage"] = std::string(to_string(r.stage));
      out["locked"] = r.locked;
      out["rationale"] = r.verdict.rationale.detail;
      send_json(res, 200, out);
    } catch (const ServiceError& e) {
      send_error(res, e.code(), e.what(), e.retry_after_s());
    } catch (const Error& e) {
      spdlog::error("submission failed: {}", e.code());
      send_error(res, e.code(), e.what());
    }
  });

  srv.Get(R"(/v1/students/([^/]+)/history)", [&svc](const httplib::Request& req, httplib::Response& res) {
    OrderedJson out = OrderedJson::array();
    for (const auto& r : svc.history(req.matches[1])) out.push_back(record_json(r));
    send_json(res, 200, out);
  });

  srv.Get("/v1/questions", [&svc](const httplib::Request&, httplib::Response& res) {
    OrderedJson out = OrderedJson::array();
    for (const auto& id : svc.bank().presentation_order()) {
      const QuestionSpec& q = svc.bank().at(id);
      OrderedJson j;
      j["question_id"] = q.question_id;
      j["stage"] = q.stage;
      j["type"] = std::string(to_string(q.type));
      j["prompt"] = q.prompt;
      j["max_attempts"] = q.max_attempts;
      out.push_back(std::move(j));
    }
    send_json(res, 200, out);
  });

  srv.Post("/v1/admin/report", [&svc](const httplib::Request& req, httplib::Response& res) {
    try {
      const Json body = detail::parse_json(req.body.empty() ? "{}" : req.body, "MALFORMED_PAYLOAD");
      if (!body.is_object()) throw ServiceError("MALFORMED_PAYLOAD", "body must be an object");
      OrderedJson out;
      out["files"] = OrderedJson::array();
      for (const auto& p : svc.write_report(body_string(body, "out_dir"))) {
        out["files"].push_back(p.string());
      }
      send_json(res, 200, out);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  const int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("IO", "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace geograde
