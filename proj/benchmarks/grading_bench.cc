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

#include <fstream>
#include <iterator>

#include <benchmark/benchmark.h>

#include "geograde/grading.h"
#include "geograde/question.h"

namespace {

const geograde::QuestionBank& bank() {
  static const auto kBank = geograde::QuestionBank::load(GEOGRADE_DATA_DIR "/bank");
  return kBank;
}

void BM_GradeClosed(benchmark::State& state) {
  const auto& q = bank().at("Q1");
  const auto payload = geograde::make_payload(q.type, "The Circumcentre");
  for (auto _ : state) benchmark::DoNotOptimize(geograde::grade(q, payload, nullptr));
}
BENCHMARK(BM_GradeClosed);

void BM_GradeConstruction(benchmark::State& state) {
  std::ifstream in(GEOGRADE_DATA_DIR "/fixtures/capsule_circumcenter.json");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto& q = bank().at("Q4");
  const auto payload = geograde::make_payload(q.type, text);
  for (auto _ : state) benchmark::DoNotOptimize(geograde::grade(q, payload, nullptr));
}
BENCHMARK(BM_GradeConstruction);

void BM_GradeOpenStub(benchmark::State& state) {
  const auto judge = geograde::JudgeHandle::stub();
  const auto& q = bank().at("Q3");
  const auto payload =
      geograde::make_payload(q.type, "The meeting point is the same distance from every house.");
  for (auto _ : state) benchmark::DoNotOptimize(geograde::grade(q, payload, &judge));
}
BENCHMARK(BM_GradeOpenStub);

}  // namespace
