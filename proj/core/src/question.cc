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

#include "geograde/question.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "geograde/error.h"
#include "geograde/grading.h"
#include "json_util.h"

namespace geograde {
namespace {

using detail::Json;

[[noreturn]] void bank_error(const std::string& message) { throw Error("BANK", message); }

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [e, n] : table) {
    if (e == v) return n;
  }
  return "UNKNOWN";
}

template <typename E, std::size_t N>
E value_of(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s,
           const char* what) {
  for (const auto& [e, n] : table) {
    if (n == s) return e;
  }
  bank_error(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<AssessmentType, std::string_view>, 3> kTypes = {{
    {AssessmentType::kClosed, "CLOSED"},
    {AssessmentType::kCgt, "CGT"},
    {AssessmentType::kOpen, "OPEN"},
}};

constexpr std::array<std::pair<RuleKind, std::string_view>, 8> kRules = {{
    {RuleKind::kObjectExists, "OBJECT_EXISTS"},
    {RuleKind::kPointEquidistant, "POINT_EQUIDISTANT"},
    {RuleKind::kPointAt, "POINT_AT"},
    {RuleKind::kAngleInRange, "ANGLE_IN_RANGE"},
    {RuleKind::kAngleIsInterior, "ANGLE_IS_INTERIOR"},
    {RuleKind::kLengthEquals, "LENGTH_EQUALS"},
    {RuleKind::kPointOnLine, "POINT_ON_LINE"},
    {RuleKind::kPolygonVertexCount, "POLYGON_VERTEX_COUNT"},
}};

constexpr std::array<std::pair<FeedbackTrigger, std::string_view>, 4> kTriggers = {{
    {FeedbackTrigger::kCorrect, "CORRECT"},
    {FeedbackTrigger::kIncorrectAttempt1, "INCORRECT_ATTEMPT_1"},
    {FeedbackTrigger::kIncorrectAttempt2, "INCORRECT_ATTEMPT_2"},
    {FeedbackTrigger::kIncorrectAttempt3, "INCORRECT_ATTEMPT_3"},
}};

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) bank_error(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bank_error(where + ": unexpected field '" + key + "'");
    }
  }
}

std::string get_string(const Json& v, const std::string& where) {
  if (!v.is_string()) bank_error(where + " must be a string");
  return v.get<std::string>();
}

double get_number(const Json& v, const std::string& where) {
  if (!v.is_number()) bank_error(where + " must be a number");
  return v.get<double>();
}

int get_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) bank_error(where + " must be an integer");
  return v.get<int>();
}

std::vector<std::string> get_strings(const Json& v, const std::string& where) {
  if (!v.is_array()) bank_error(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(get_string(s, where));
  return out;
}

ObjectSelector selector_from_json(const Json& v, const std::string& where) {
  ObjectSelector sel;
  if (v.is_string()) {
    sel.name = v.get<std::string>();
    return sel;
  }
  check_keys(v, {"name", "kind"}, where);
  if (auto it = v.find("name"); it != v.end()) sel.name = get_string(*it, where + ".name");
  if (auto it = v.find("kind"); it != v.end()) {
    const std::string k = get_string(*it, where + ".kind");
    sel.kind = object_kind_from_string(k);
    if (!sel.kind) bank_error(where + ": unknown object kind '" + k + "'");
  }
  if (!sel.name && !sel.kind) bank_error(where + ": selector needs a name or a kind");
  return sel;
}

std::vector<ObjectSelector> selectors_from_json(const Json& v, const std::string& where) {
  if (!v.is_array()) bank_error(where + " must be an array");
  std::vector<ObjectSelector> out;
  for (const auto& s : v) out.push_back(selector_from_json(s, where));
  return out;
}

PointAnchor anchor_from_json(const Json& v, const std::string& where) {
  PointAnchor a;
  if (v.contains("x") || v.contains("y")) {
    check_keys(v, {"x", "y"}, where);
    a.kind = PointAnchor::Kind::kCoordinates;
    a.x = get_number(detail::require(v, "x", "BANK"), where + ".x");
    a.y = get_number(detail::require(v, "y", "BANK"), where + ".y");
    return a;
  }
  check_keys(v, {"circumcenter", "incenter", "midpoint", "centroid"}, where);
  if (v.size() != 1) bank_error(where + ": anchor needs exactly one construction");
  const std::string key = v.begin().key();
  const Json& pts = v.begin().value();
  if (key == "circumcenter") a.kind = PointAnchor::Kind::kCircumcenter;
  if (key == "incenter") a.kind = PointAnchor::Kind::kIncenter;
  if (key == "midpoint") a.kind = PointAnchor::Kind::kMidpoint;
  if (key == "centroid") a.kind = PointAnchor::Kind::kCentroid;
  a.points = selectors_from_json(pts, where + "." + key);
  return a;
}

CgtRule rule_from_json(const Json& v, const std::string& where) {
  check_keys(v, {"rule", "target", "from", "min_count", "count", "range", "vertex", "value",
                 "equals", "at", "line", "error_tag"},
             where);
  CgtRule r;
  r.kind = rule_kind_from_string(get_string(detail::require(v, "rule", "BANK"), where + ".rule"));
  if (auto it = v.find("target"); it != v.end()) r.target = selector_from_json(*it, where + ".target");
  if (auto it = v.find("from"); it != v.end()) r.references = selectors_from_json(*it, where + ".from");
  if (auto it = v.find("min_count"); it != v.end()) r.min_count = get_int(*it, where + ".min_count");
  if (auto it = v.find("count"); it != v.end()) r.count = get_int(*it, where + ".count");
  if (auto it = v.find("range"); it != v.end()) {
    if (!it->is_array() || it->size() != 2) bank_error(where + ".range must be [min, max]");
    r.range_min = get_number((*it)[0], where + ".range");
    r.range_max = get_number((*it)[1], where + ".range");
  }
  if (auto it = v.find("vertex"); it != v.end()) r.vertex = selector_from_json(*it, where + ".vertex");
  if (auto it = v.find("value"); it != v.end()) r.value = get_number(*it, where + ".value");
  if (auto it = v.find("equals"); it != v.end()) r.equals = selector_from_json(*it, where + ".equals");
  if (auto it = v.find("at"); it != v.end()) r.at = anchor_from_json(*it, where + ".at");
  if (auto it = v.find("line"); it != v.end()) r.line = selector_from_json(*it, where + ".line");
  if (auto it = v.find("error_tag"); it != v.end()) r.error_tag = get_string(*it, where + ".error_tag");
  if (!v.contains("target")) bank_error(where + ": rule needs a target");
  return r;
}

QuestionSpec question_from_json_value(const Json& v, int default_stage) {
  const std::string where =
      v.is_object() && v.contains("question_id") && v["question_id"].is_string()
          ? v["question_id"].get<std::string>()
          : std::string("question");
  check_keys(v, {"question_id", "stage", "type", "prompt", "max_attempts", "closed_key",
                 "rule_program", "exemplars", "feedback_exemplars", "forbidden_phrases",
                 "tolerances"},
             where);
  QuestionSpec q;
  q.question_id = get_string(detail::require(v, "question_id", "BANK"), "question_id");
  q.stage = v.contains("stage") ? get_int(v["stage"], where + ".stage") : default_stage;
  q.type = assessment_type_from_string(get_string(detail::require(v, "type", "BANK"), where + ".type"));
  q.prompt = get_string(detail::require(v, "prompt", "BANK"), where + ".prompt");
  if (auto it = v.find("max_attempts"); it != v.end()) q.max_attempts = get_int(*it, where + ".max_attempts");

  if (auto it = v.find("closed_key"); it != v.end()) {
    std::set<std::string> key;
    for (const auto& s : get_strings(*it, where + ".closed_key")) key.insert(normalize_closed_answer(s));
    q.closed_key = std::move(key);
  }
  if (auto it = v.find("rule_program"); it != v.end()) {
    if (!it->is_array()) bank_error(where + ".rule_program must be an array");
    std::vector<CgtRule> program;
    for (std::size_t i = 0; i < it->size(); ++i) {
      program.push_back(rule_from_json((*it)[i], where + ".rule_program[" + std::to_string(i) + "]"));
    }
    q.rule_program = std::move(program);
  }
  if (auto it = v.find("exemplars"); it != v.end()) {
    if (!it->is_array()) bank_error(where + ".exemplars must be an array");
    std::vector<ExemplarAnswer> exemplars;
    for (const auto& e : *it) {
      check_keys(e, {"text", "concept_tags"}, where + ".exemplars");
      ExemplarAnswer ex;
      ex.text = get_string(detail::require(e, "text", "BANK"), where + ".exemplars.text");
      for (auto& t : get_strings(detail::require(e, "concept_tags", "BANK"), where + ".exemplars.concept_tags")) {
        ex.concept_tags.insert(std::move(t));
      }
      exemplars.push_back(std::move(ex));
    }
    q.exemplars = std::move(exemplars);
  }
  if (auto it = v.find("feedback_exemplars"); it != v.end()) {
    if (!it->is_array()) bank_error(where + ".feedback_exemplars must be an array");
    for (const auto& e : *it) {
      check_keys(e, {"trigger", "anticipated_error", "text"}, where + ".feedback_exemplars");
      FeedbackExemplar fe;
      fe.trigger = feedback_trigger_from_string(
          get_string(detail::require(e, "trigger", "BANK"), where + ".feedback_exemplars.trigger"));
      if (auto a = e.find("anticipated_error"); a != e.end()) {
        fe.anticipated_error = get_string(*a, where + ".feedback_exemplars.anticipated_error");
      }
      fe.text = get_string(detail::require(e, "text", "BANK"), where + ".feedback_exemplars.text");
      q.feedback_exemplars.push_back(std::move(fe));
    }
  }
  if (auto it = v.find("forbidden_phrases"); it != v.end()) {
    q.forbidden_phrases = get_strings(*it, where + ".forbidden_phrases");
  }
  if (auto it = v.find("tolerances"); it != v.end()) {
    check_keys(*it, {"point", "length", "angle_deg"}, where + ".tolerances");
    geometry::Tolerances tol;
    if (it->contains("point")) tol.point = get_number((*it)["point"], where + ".tolerances.point");
    if (it->contains("length")) tol.length = get_number((*it)["length"], where + ".tolerances.length");
    if (it->contains("angle_deg")) tol.angle_deg = get_number((*it)["angle_deg"], where + ".tolerances.angle_deg");
    q.tolerances = tol;
  }
  q.validate();
  return q;
}

void load_document(const Json& doc, std::vector<QuestionSpec>& out) {
  if (doc.is_array()) {
    for (const auto& q : doc) out.push_back(question_from_json_value(q, 0));
    return;
  }
  if (doc.is_object() && doc.contains("questions")) {
    check_keys(doc, {"stage", "title", "questions"}, "stage file");
    const int stage = doc.contains("stage") ? get_int(doc["stage"], "stage") : 0;
    if (!doc["questions"].is_array()) bank_error("'questions' must be an array");
    for (const auto& q : doc["questions"]) out.push_back(question_from_json_value(q, stage));
    return;
  }
  out.push_back(question_from_json_value(doc, 0));
}

struct SplitId {
  std::string_view prefix;
  long long number;
};

// Splits "Q12" into ("Q", 12); ids without trailing digits yield nullopt.
std::optional<SplitId> split_id(std::string_view id) {
  std::size_t i = id.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(id[i - 1]))) --i;
  if (i == id.size() || id.size() - i > 15) return std::nullopt;
  return SplitId{id.substr(0, i), std::stoll(std::string(id.substr(i)))};
}

}  // namespace

std::string_view to_string(AssessmentType t) { return name_of(kTypes, t); }
AssessmentType assessment_type_from_string(std::string_view s) {
  return value_of(kTypes, s, "assessment type");
}
std::string_view to_string(RuleKind k) { return name_of(kRules, k); }
RuleKind rule_kind_from_string(std::string_view s) { return value_of(kRules, s, "rule kind"); }
std::string_view to_string(FeedbackTrigger t) { return name_of(kTriggers, t); }
FeedbackTrigger feedback_trigger_from_string(std::string_view s) {
  return value_of(kTriggers, s, "feedback trigger");
}

bool ObjectSelector::matches(const SessionObject& obj) const {
  if (kind && obj.kind != *kind) return false;
  if (name && obj.id != *name && obj.label != *name) return false;
  return true;
}

std::string ObjectSelector::describe() const {
  std::string out;
  if (kind) out += std::string(to_string(*kind));
  if (name) out += (out.empty() ? "" : " ") + std::string("'") + *name + "'";
  return out.empty() ? "any object" : out;
}

void CgtRule::validate() const {
  const std::string what(to_string(kind));
  auto need = [&](bool ok, const char* field) {
    if (!ok) bank_error(what + " rule requires '" + field + "'");
  };
  switch (kind) {
    case RuleKind::kObjectExists:
      need(min_count >= 1, "min_count >= 1");
      break;
    case RuleKind::kPointEquidistant:
      need(references.size() >= 2, "from (at least 2 points)");
      break;
    case RuleKind::kPointAt:
      need(at.has_value(), "at");
      if (at->kind == PointAnchor::Kind::kCircumcenter || at->kind == PointAnchor::Kind::kIncenter) {
        need(at->points.size() == 3, "at (3 points)");
      } else if (at->kind == PointAnchor::Kind::kMidpoint) {
        need(at->points.size() == 2, "at (2 points)");
      } else if (at->kind == PointAnchor::Kind::kCentroid) {
        need(!at->points.empty(), "at (points)");
      }
      break;
    case RuleKind::kAngleInRange:
      need(range_min.has_value() && range_max.has_value(), "range");
      need(*range_min < *range_max, "non-empty range");
      break;
    case RuleKind::kAngleIsInterior:
      break;
    case RuleKind::kLengthEquals:
      need(value.has_value() != equals.has_value(), "exactly one of value / equals");
      break;
    case RuleKind::kPointOnLine:
      need(line.has_value(), "line");
      break;
    case RuleKind::kPolygonVertexCount:
      need(count.has_value() && *count >= 3, "count >= 3");
      break;
  }
}

void QuestionSpec::validate() const {
  const std::string& id = question_id;
  if (id.empty()) bank_error("question_id must not be empty");
  if (max_attempts < 1) bank_error(id + ": max_attempts must be >= 1");
  if (prompt.empty()) bank_error(id + ": prompt must not be empty");
  const int present = int(closed_key.has_value()) + int(rule_program.has_value()) +
                      int(exemplars.has_value());
  if (present != 1) bank_error(id + ": exactly one of closed_key, rule_program, exemplars is required");
  switch (type) {
    case AssessmentType::kClosed:
      if (!closed_key || closed_key->empty()) bank_error(id + ": CLOSED questions need a closed_key");
      break;
    case AssessmentType::kCgt:
      if (!rule_program || rule_program->empty()) bank_error(id + ": CGT questions need a rule_program");
      for (const auto& r : *rule_program) r.validate();
      break;
    case AssessmentType::kOpen:
      if (!exemplars || exemplars->empty()) bank_error(id + ": OPEN questions need exemplars");
      for (const auto& e : *exemplars) {
        if (e.concept_tags.empty()) bank_error(id + ": exemplar concept_tags must not be empty");
        if (e.text.empty()) bank_error(id + ": exemplar text must not be empty");
      }
      break;
  }
  std::set<std::pair<FeedbackTrigger, std::string>> seen;
  for (const auto& fe : feedback_exemplars) {
    if (fe.text.empty()) bank_error(id + ": feedback exemplar text must not be empty");
    if (!seen.emplace(fe.trigger, fe.anticipated_error.value_or("")).second) {
      bank_error(id + ": duplicate feedback exemplar for " + std::string(to_string(fe.trigger)));
    }
  }
  if (tolerances) tolerances->validate();
}

QuestionBank::QuestionBank(std::vector<QuestionSpec> questions) {
  for (auto& q : questions) add(std::move(q));
}

void QuestionBank::add(QuestionSpec q) {
  q.validate();
  if (index_.count(q.question_id)) bank_error("duplicate question id '" + q.question_id + "'");
  index_.emplace(q.question_id, questions_.size());
  questions_.push_back(std::move(q));
}

QuestionBank QuestionBank::from_json(std::string_view text) {
  std::vector<QuestionSpec> qs;
  load_document(detail::parse_json(text, "BANK"), qs);
  return QuestionBank(std::move(qs));
}

QuestionBank QuestionBank::load(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error("IO", "question bank not found: " + path.string());
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<QuestionSpec> qs;
  for (const auto& f : files) {
    try {
      load_document(detail::parse_json(detail::read_file(f), "BANK"), qs);
    } catch (const Error& e) {
      if (e.code() == "IO") throw;
      throw Error("BANK", f.filename().string() + ": " + e.what());
    }
  }
  return QuestionBank(std::move(qs));
}

const QuestionSpec* QuestionBank::find(std::string_view question_id) const {
  auto it = index_.find(question_id);
  return it == index_.end() ? nullptr : &questions_[it->second];
}

const QuestionSpec& QuestionBank::at(std::string_view question_id) const {
  const QuestionSpec* q = find(question_id);
  if (!q) throw Error("UNKNOWN_QUESTION", "no question '" + std::string(question_id) + "'");
  return *q;
}

std::vector<std::string> QuestionBank::presentation_order() const {
  std::vector<std::string> ids;
  for (const auto& q : questions_) ids.push_back(q.question_id);
  std::sort(ids.begin(), ids.end(),
            [](const std::string& a, const std::string& b) { return question_id_less(a, b); });
  return ids;
}

std::map<std::string, AssessmentType> QuestionBank::type_map() const {
  std::map<std::string, AssessmentType> m;
  for (const auto& q : questions_) m.emplace(q.question_id, q.type);
  return m;
}

QuestionSpec question_from_json(std::string_view text) {
  return question_from_json_value(detail::parse_json(text, "BANK"), 0);
}

bool question_id_less(std::string_view a, std::string_view b) {
  const auto sa = split_id(a);
  const auto sb = split_id(b);
  if (sa && sb) {
    if (sa->prefix != sb->prefix) return sa->prefix < sb->prefix;
    if (sa->number != sb->number) return sa->number < sb->number;
  }
  return a < b;
}

}  // namespace geograde
