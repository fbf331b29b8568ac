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

#ifndef GEOGRADE_HTTP_SERVER_H_
#define GEOGRADE_HTTP_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>

#include "geograde/service.h"

namespace geograde {

// JSON over HTTP in front of an AssessmentService.
//
//   POST /v1/submissions              {"student_id", "question_id", "answer"}
//   GET  /v1/students/{id}/history
//   GET  /v1/questions
//   POST /v1/admin/report             {"out_dir"}
//
// Errors are {"code", "message", "retry_after"?}. The student id may also
// come from the X-Student-Id header.
class HttpServer {
 public:
  explicit HttpServer(AssessmentService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free port) and returns the bound port. Throws
  // Error("IO") when binding fails.
  int bind(const std::string& host, int port);
  // Serves until stop(). Call after bind().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geograde

#endif  // GEOGRADE_HTTP_SERVER_H_
