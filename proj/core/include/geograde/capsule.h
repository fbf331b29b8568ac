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

#ifndef GEOGRADE_CAPSULE_H_
#define GEOGRADE_CAPSULE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "geograde/error.h"
#include "geograde/geometry.h"

namespace geograde {

// Raw wire payload of a construction session, exactly as the client sent it.
struct ObjectCapsule {
  std::string raw_text;
};

enum class ObjectKind {
  kPoint,
  kIntersectionPoint,
  kMovablePoint,
  kLine,
  kSegment,
  kPerpBisector,
  kMidpoint,
  kCircle,
  kCircumcircle,
  kIncenterCircle,
  kPolygon,
  kAngle,
  kAngleMarker,
  kLength,
  kDistance,
  kMeasureAngle,
};

std::string_view to_string(ObjectKind kind);
// Accepts the UPPER_SNAKE wire names only.
std::optional<ObjectKind> object_kind_from_string(std::string_view name);
const std::vector<ObjectKind>& all_object_kinds();

bool is_point_like(ObjectKind kind);
bool is_line_like(ObjectKind kind);

struct SessionObject {
  std::string id;
  ObjectKind kind = ObjectKind::kPoint;
  std::vector<std::string> refs;
  std::vector<double> params;
  std::optional<std::string> label;

  friend bool operator==(const SessionObject&, const SessionObject&) = default;
};

enum class CapsuleErrc {
  kSyntax,
  kUnknownKind,
  kBadArity,
  kDanglingRef,
  kForwardRef,
  kInconsistent,
};

class CapsuleError : public Error {
 public:
  CapsuleError(CapsuleErrc errc, const std::string& message);
  CapsuleErrc errc() const noexcept { return errc_; }

 private:
  CapsuleErrc errc_;
};

std::string_view to_string(CapsuleErrc errc);

// Geometry derived for an object. Measurements (LENGTH, DISTANCE) hold a
// double; ANGLE_MARKER holds the marked angle.
using Shape = std::variant<geometry::Point, geometry::Line, geometry::Segment,
                           geometry::Circle, geometry::Polygon, geometry::AngleMeasure,
                           double>;

// A validated construction: objects in creation order, each with its
// materialized shape. Build one with parse() or from_objects().
class GeometrySession {
 public:
  GeometrySession() = default;

  // Validates references, arity and embedded numerics, computing every shape.
  static GeometrySession from_objects(std::vector<SessionObject> objects,
                                      const geometry::Tolerances& tol = {});

  const std::vector<SessionObject>& objects() const noexcept { return objects_; }
  std::size_t size() const noexcept { return objects_.size(); }
  bool empty() const noexcept { return objects_.empty(); }

  const SessionObject* find(std::string_view id) const;
  const Shape& shape(std::size_t index) const { return shapes_.at(index); }
  const Shape* shape_of(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<SessionObject> objects_;
  std::vector<Shape> shapes_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Exactly one CapsuleError on any invalid input; never any other exception.
GeometrySession parse(const ObjectCapsule& capsule, const geometry::Tolerances& tol = {});

// Reals are written with 17 significant digits.
ObjectCapsule serialize(const GeometrySession& session);
ObjectCapsule serialize(const std::vector<SessionObject>& objects);

std::vector<SessionObject> extract(const GeometrySession& session, ObjectKind kind);

}  // namespace geograde

#endif  // GEOGRADE_CAPSULE_H_
