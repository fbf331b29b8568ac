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

#include "geograde/capsule.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "json_util.h"

namespace geograde {
namespace {

using geometry::AngleMeasure;
using geometry::Circle;
using geometry::GeometryError;
using geometry::Line;
using geometry::Point;
using geometry::Polygon;
using geometry::Segment;
using geometry::Tolerances;

struct KindName {
  ObjectKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 16> kKindNames = {{
    {ObjectKind::kPoint, "POINT"},
    {ObjectKind::kIntersectionPoint, "INTERSECTION_POINT"},
    {ObjectKind::kMovablePoint, "MOVABLE_POINT"},
    {ObjectKind::kLine, "LINE"},
    {ObjectKind::kSegment, "SEGMENT"},
    {ObjectKind::kPerpBisector, "PERP_BISECTOR"},
    {ObjectKind::kMidpoint, "MIDPOINT"},
    {ObjectKind::kCircle, "CIRCLE"},
    {ObjectKind::kCircumcircle, "CIRCUMCIRCLE"},
    {ObjectKind::kIncenterCircle, "INCENTER_CIRCLE"},
    {ObjectKind::kPolygon, "POLYGON"},
    {ObjectKind::kAngle, "ANGLE"},
    {ObjectKind::kAngleMarker, "ANGLE_MARKER"},
    {ObjectKind::kLength, "LENGTH"},
    {ObjectKind::kDistance, "DISTANCE"},
    {ObjectKind::kMeasureAngle, "MEASURE_ANGLE"},
}};

[[noreturn]] void fail(CapsuleErrc errc, const std::string& message) {
  throw CapsuleError(errc, message);
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(id[0])) return false;
  return std::all_of(id.begin() + 1, id.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

// Number of params a kind accepts; refs are checked per kind below.
bool params_ok(ObjectKind kind, std::size_t n) {
  switch (kind) {
    case ObjectKind::kPoint:
    case ObjectKind::kMovablePoint:
      return n == 2;
    case ObjectKind::kIntersectionPoint:
    case ObjectKind::kMidpoint:
      return n == 0 || n == 2;
    case ObjectKind::kLine:
    case ObjectKind::kSegment:
    case ObjectKind::kPerpBisector:
    case ObjectKind::kPolygon:
    case ObjectKind::kAngleMarker:
      return n == 0;
    case ObjectKind::kCircle:
    case ObjectKind::kAngle:
    case ObjectKind::kLength:
    case ObjectKind::kDistance:
      return n <= 1;
    case ObjectKind::kCircumcircle:
    case ObjectKind::kIncenterCircle:
      return n == 0 || n == 3;
    case ObjectKind::kMeasureAngle:
      return n == 1;
  }
  return false;
}

class Builder {
 public:
  explicit Builder(const Tolerances& tol) : tol_(tol) {}

  // Materializes the shape for obj; every ref is already known to resolve
  // to an earlier object.
  Shape build(const SessionObject& obj, const std::vector<SessionObject>& objects,
              const std::vector<Shape>& shapes,
              const std::unordered_map<std::string, std::size_t>& index) {
    auto ref_kind = [&](std::size_t i) { return objects[index.at(obj.refs[i])].kind; };
    auto ref_shape = [&](std::size_t i) -> const Shape& { return shapes[index.at(obj.refs[i])]; };
    auto expect_refs = [&](std::size_t n) {
      if (obj.refs.size() != n) {
        fail(CapsuleErrc::kBadArity, obj.id + ": " + std::string(to_string(obj.kind)) +
                                         " takes " + std::to_string(n) + " refs");
      }
    };
    auto expect_kind = [&](std::size_t i, bool ok, const char* what) {
      if (!ok) fail(CapsuleErrc::kBadArity, obj.id + ": ref '" + obj.refs[i] + "' must be " + what);
    };
    auto point_ref = [&](std::size_t i) -> Point {
      expect_kind(i, is_point_like(ref_kind(i)), "a point");
      return std::get<Point>(ref_shape(i));
    };
    auto segment_ref = [&](std::size_t i) -> Segment {
      expect_kind(i, ref_kind(i) == ObjectKind::kSegment, "a segment");
      return std::get<Segment>(ref_shape(i));
    };
    auto line_ref = [&](std::size_t i) -> Line {
      expect_kind(i, is_line_like(ref_kind(i)), "a line, segment or bisector");
      const Shape& s = ref_shape(i);
      if (const auto* seg = std::get_if<Segment>(&s)) return Line::through(seg->a(), seg->b(), tol_);
      return std::get<Line>(s);
    };

    if (!params_ok(obj.kind, obj.params.size())) {
      fail(CapsuleErrc::kBadArity, obj.id + ": wrong number of params for " +
                                       std::string(to_string(obj.kind)));
    }

    switch (obj.kind) {
      case ObjectKind::kPoint:
      case ObjectKind::kMovablePoint:
        expect_refs(0);
        return Point(obj.params[0], obj.params[1]);
      case ObjectKind::kIntersectionPoint: {
        expect_refs(2);
        const Line l1 = line_ref(0);
        const Line l2 = line_ref(1);
        const Point p = derive(obj, [&] { return geometry::line_intersection(l1, l2, tol_); });
        check_point(obj, p, 0);
        return p;
      }
      case ObjectKind::kLine: {
        expect_refs(2);
        const Point p = point_ref(0);
        const Point q = point_ref(1);
        return derive(obj, [&] { return Line::through(p, q, tol_); });
      }
      case ObjectKind::kSegment: {
        expect_refs(2);
        const Point p = point_ref(0);
        const Point q = point_ref(1);
        return derive(obj, [&] { return Segment(p, q, tol_); });
      }
      case ObjectKind::kPerpBisector:
        expect_refs(1);
        return geometry::perpendicular_bisector(segment_ref(0));
      case ObjectKind::kMidpoint: {
        expect_refs(1);
        const Point m = geometry::midpoint(segment_ref(0));
        check_point(obj, m, 0);
        return m;
      }
      case ObjectKind::kCircle: {
        expect_refs(2);
        const Point center = point_ref(0);
        const Point through = point_ref(1);
        const double r = geometry::distance(center, through);
        check_length(obj, r, 0);
        return derive(obj, [&] { return Circle(center, r, tol_); });
      }
      case ObjectKind::kCircumcircle:
      case ObjectKind::kIncenterCircle: {
        expect_refs(3);
        const Point a = point_ref(0);
        const Point b = point_ref(1);
        const Point c = point_ref(2);
        const Circle circle = derive(obj, [&] {
          if (obj.kind == ObjectKind::kCircumcircle) {
            const Point o = geometry::circumcenter(a, b, c, tol_);
            return Circle(o, geometry::distance(o, a), tol_);
          }
          const geometry::Incircle in = geometry::incenter(a, b, c, tol_);
          return Circle(in.center, in.radius, tol_);
        });
        check_point(obj, circle.center(), 0);
        check_length(obj, circle.radius(), 2);
        return circle;
      }
      case ObjectKind::kPolygon: {
        if (obj.refs.size() < 3) fail(CapsuleErrc::kBadArity, obj.id + ": POLYGON needs at least 3 refs");
        std::vector<Point> vertices;
        for (std::size_t i = 0; i < obj.refs.size(); ++i) vertices.push_back(point_ref(i));
        return derive(obj, [&] { return Polygon(std::move(vertices), tol_); });
      }
      case ObjectKind::kAngle:
      case ObjectKind::kMeasureAngle: {
        expect_refs(3);
        const Point p1 = point_ref(0);
        const Point v = point_ref(1);
        const Point p2 = point_ref(2);
        return derive(obj, [&] {
          const double deg = obj.params.empty()
                                 ? geometry::interior_angle(p1, v, p2, tol_)
                                 : obj.params[0];
          return AngleMeasure(p1, v, p2, deg, tol_);
        });
      }
      case ObjectKind::kAngleMarker: {
        expect_refs(1);
        const ObjectKind k = ref_kind(0);
        expect_kind(0, k == ObjectKind::kAngle || k == ObjectKind::kMeasureAngle, "an angle");
        return std::get<AngleMeasure>(ref_shape(0));
      }
      case ObjectKind::kLength: {
        expect_refs(1);
        const double len = segment_ref(0).length();
        check_length(obj, len, 0);
        return len;
      }
      case ObjectKind::kDistance: {
        expect_refs(2);
        const double d = geometry::distance(point_ref(0), point_ref(1));
        check_length(obj, d, 0);
        return d;
      }
    }
    fail(CapsuleErrc::kUnknownKind, obj.id);
  }

 private:
  // Degenerate derived geometry means the capsule contradicts itself.
  template <typename F>
  auto derive(const SessionObject& obj, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const GeometryError& e) {
      fail(CapsuleErrc::kInconsistent, obj.id + ": " + e.what());
    }
  }

  void check_point(const SessionObject& obj, const Point& p, std::size_t at) const {
    if (obj.params.size() < at + 2) return;
    const Point stored(obj.params[at], obj.params[at + 1]);
    if (!geometry::points_coincide(p, stored, tol_)) {
      fail(CapsuleErrc::kInconsistent, obj.id + ": stored coordinates disagree with construction");
    }
  }

  void check_length(const SessionObject& obj, double len, std::size_t at) const {
    if (obj.params.size() < at + 1) return;
    const double bound = std::max(tol_.point, tol_.length * std::abs(len));
    if (std::abs(obj.params[at] - len) > bound) {
      fail(CapsuleErrc::kInconsistent, obj.id + ": stored length disagrees with construction");
    }
  }

  Tolerances tol_;
};

SessionObject object_from_json(const detail::Json& rec) {
  if (!rec.is_object()) fail(CapsuleErrc::kSyntax, "each record must be an object");
  static const std::unordered_set<std::string> kAllowed = {"id", "kind", "refs", "params", "label"};
  for (const auto& [key, value] : rec.items()) {
    (void)value;
    if (!kAllowed.count(key)) fail(CapsuleErrc::kSyntax, "unexpected field '" + key + "'");
  }
  for (const char* key : {"id", "kind", "refs", "params"}) {
    if (!rec.contains(key)) fail(CapsuleErrc::kSyntax, std::string("missing field '") + key + "'");
  }
  SessionObject obj;
  const auto& id = rec["id"];
  if (!id.is_string()) fail(CapsuleErrc::kSyntax, "id must be a string");
  obj.id = id.get<std::string>();
  if (!valid_id(obj.id)) fail(CapsuleErrc::kSyntax, "invalid id '" + obj.id + "'");

  const auto& kind = rec["kind"];
  if (!kind.is_string()) fail(CapsuleErrc::kSyntax, obj.id + ": kind must be a string");
  const auto parsed = object_kind_from_string(kind.get<std::string>());
  if (!parsed) fail(CapsuleErrc::kUnknownKind, obj.id + ": unknown kind '" + kind.get<std::string>() + "'");
  obj.kind = *parsed;

  const auto& refs = rec["refs"];
  if (!refs.is_array()) fail(CapsuleErrc::kSyntax, obj.id + ": refs must be an array");
  for (const auto& r : refs) {
    if (!r.is_string()) fail(CapsuleErrc::kSyntax, obj.id + ": refs must be strings");
    obj.refs.push_back(r.get<std::string>());
    if (!valid_id(obj.refs.back())) fail(CapsuleErrc::kSyntax, obj.id + ": invalid ref id");
  }

  const auto& params = rec["params"];
  if (!params.is_array()) fail(CapsuleErrc::kSyntax, obj.id + ": params must be an array");
  for (const auto& p : params) {
    if (!p.is_number()) fail(CapsuleErrc::kSyntax, obj.id + ": params must be numbers");
    const double v = p.get<double>();
    if (!std::isfinite(v)) fail(CapsuleErrc::kSyntax, obj.id + ": params must be finite");
    obj.params.push_back(v);
  }

  if (auto it = rec.find("label"); it != rec.end()) {
    if (!it->is_string()) fail(CapsuleErrc::kSyntax, obj.id + ": label must be a string");
    obj.label = it->get<std::string>();
  }
  return obj;
}

void append_json_string(std::string& out, const std::string& s) {
  out += detail::Json(s).dump(-1, ' ', false, detail::Json::error_handler_t::strict);
}

}  // namespace

std::string_view to_string(ObjectKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "UNKNOWN";
}

std::optional<ObjectKind> object_kind_from_string(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

const std::vector<ObjectKind>& all_object_kinds() {
  static const std::vector<ObjectKind> kinds = [] {
    std::vector<ObjectKind> v;
    for (const auto& kn : kKindNames) v.push_back(kn.kind);
    return v;
  }();
  return kinds;
}

bool is_point_like(ObjectKind kind) {
  return kind == ObjectKind::kPoint || kind == ObjectKind::kMovablePoint ||
         kind == ObjectKind::kIntersectionPoint || kind == ObjectKind::kMidpoint;
}

bool is_line_like(ObjectKind kind) {
  return kind == ObjectKind::kLine || kind == ObjectKind::kSegment ||
         kind == ObjectKind::kPerpBisector;
}

std::string_view to_string(CapsuleErrc errc) {
  switch (errc) {
    case CapsuleErrc::kSyntax: return "SYNTAX";
    case CapsuleErrc::kUnknownKind: return "UNKNOWN_KIND";
    case CapsuleErrc::kBadArity: return "BAD_ARITY";
    case CapsuleErrc::kDanglingRef: return "DANGLING_REF";
    case CapsuleErrc::kForwardRef: return "FORWARD_REF";
    case CapsuleErrc::kInconsistent: return "INCONSISTENT";
  }
  return "SYNTAX";
}

CapsuleError::CapsuleError(CapsuleErrc errc, const std::string& message)
    : Error(std::string(to_string(errc)), message), errc_(errc) {}

GeometrySession GeometrySession::from_objects(std::vector<SessionObject> objects,
                                              const geometry::Tolerances& tol) {
  GeometrySession session;
  std::unordered_map<std::string, std::size_t> declared;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SessionObject& obj = objects[i];
    if (!valid_id(obj.id)) fail(CapsuleErrc::kSyntax, "invalid id '" + obj.id + "'");
    for (const auto& r : obj.refs) {
      if (!valid_id(r)) fail(CapsuleErrc::kSyntax, obj.id + ": invalid ref id");
    }
    for (double p : obj.params) {
      if (!std::isfinite(p)) fail(CapsuleErrc::kSyntax, obj.id + ": params must be finite");
    }
    if (!declared.emplace(obj.id, i).second) {
      fail(CapsuleErrc::kSyntax, "duplicate id '" + obj.id + "'");
    }
  }

  Builder builder(tol);
  session.shapes_.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SessionObject& obj = objects[i];
    for (const auto& r : obj.refs) {
      auto it = declared.find(r);
      if (it == declared.end()) fail(CapsuleErrc::kDanglingRef, obj.id + ": unknown ref '" + r + "'");
      if (it->second >= i) fail(CapsuleErrc::kForwardRef, obj.id + ": ref '" + r + "' is not earlier");
    }
    session.shapes_.push_back(builder.build(obj, objects, session.shapes_, declared));
  }
  session.objects_ = std::move(objects);
  session.index_ = std::move(declared);
  return session;
}

const SessionObject* GeometrySession::find(std::string_view id) const {
  auto i = index_of(id);
  return i ? &objects_[*i] : nullptr;
}

const Shape* GeometrySession::shape_of(std::string_view id) const {
  auto i = index_of(id);
  return i ? &shapes_[*i] : nullptr;
}

std::optional<std::size_t> GeometrySession::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GeometrySession parse(const ObjectCapsule& capsule, const geometry::Tolerances& tol) {
  std::string error;
  std::optional<detail::Json> parsed = detail::try_parse_json(capsule.raw_text, &error);
  if (!parsed) fail(CapsuleErrc::kSyntax, error);
  const detail::Json doc = std::move(*parsed);
  if (!doc.is_array()) fail(CapsuleErrc::kSyntax, "capsule must be a top-level array");
  std::vector<SessionObject> objects;
  objects.reserve(doc.size());
  for (const auto& rec : doc) objects.push_back(object_from_json(rec));
  return GeometrySession::from_objects(std::move(objects), tol);
}

ObjectCapsule serialize(const std::vector<SessionObject>& objects) {
  if (objects.empty()) return {"[]"};
  std::string out = "[\n";
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SessionObject& obj = objects[i];
    out += "{\"id\":";
    append_json_string(out, obj.id);
    out += ",\"kind\":\"";
    out += to_string(obj.kind);
    out += "\",\"refs\":[";
    for (std::size_t j = 0; j < obj.refs.size(); ++j) {
      if (j) out += ',';
      append_json_string(out, obj.refs[j]);
    }
    out += "],\"params\":[";
    for (std::size_t j = 0; j < obj.params.size(); ++j) {
      if (j) out += ',';
      out += detail::format_real(obj.params[j]);
    }
    out += ']';
    if (obj.label) {
      out += ",\"label\":";
      append_json_string(out, *obj.label);
    }
    out += '}';
    out += i + 1 < objects.size() ? ",\n" : "\n";
  }
  out += "]";
  return {out};
}

ObjectCapsule serialize(const GeometrySession& session) { return serialize(session.objects()); }

std::vector<SessionObject> extract(const GeometrySession& session, ObjectKind kind) {
  std::vector<SessionObject> out;
  for (const auto& obj : session.objects()) {
    if (obj.kind == kind) out.push_back(obj);
  }
  return out;
}

}  // namespace geograde
