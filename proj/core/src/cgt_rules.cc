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

#include "cgt_rules.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geograde::detail {
namespace {

using geometry::AngleMeasure;
using geometry::Point;
using geometry::Tolerances;

constexpr char kReflexTag[] = "reflex_angle_measured";

struct Candidate {
  const SessionObject* object;
  const Shape* shape;
};

std::vector<Candidate> matching(const GeometrySession& s, const ObjectSelector& sel) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (sel.matches(s.objects()[i])) out.push_back({&s.objects()[i], &s.shape(i)});
  }
  return out;
}

std::vector<std::pair<const SessionObject*, Point>> matching_points(const GeometrySession& s,
                                                                    const ObjectSelector& sel) {
  std::vector<std::pair<const SessionObject*, Point>> out;
  for (const auto& c : matching(s, sel)) {
    if (is_point_like(c.object->kind)) out.emplace_back(c.object, std::get<Point>(*c.shape));
  }
  return out;
}

std::optional<Point> first_point(const GeometrySession& s, const ObjectSelector& sel) {
  auto pts = matching_points(s, sel);
  if (pts.empty()) return std::nullopt;
  return pts.front().second;
}

std::vector<std::pair<const SessionObject*, AngleMeasure>> matching_angles(
    const GeometrySession& s, const ObjectSelector& sel) {
  std::vector<std::pair<const SessionObject*, AngleMeasure>> out;
  for (const auto& c : matching(s, sel)) {
    if (const auto* a = std::get_if<AngleMeasure>(c.shape)) out.emplace_back(c.object, *a);
  }
  return out;
}

// Length-like value of a measurable object.
std::optional<double> measure_of(const Shape& shape) {
  if (const auto* d = std::get_if<double>(&shape)) return *d;
  if (const auto* seg = std::get_if<geometry::Segment>(&shape)) return seg->length();
  if (const auto* c = std::get_if<geometry::Circle>(&shape)) return c->radius();
  return std::nullopt;
}

double distance_to_segment(const Point& p, const geometry::Segment& s) {
  const double dx = s.b().x() - s.a().x();
  const double dy = s.b().y() - s.a().y();
  const double len2 = dx * dx + dy * dy;
  double t = ((p.x() - s.a().x()) * dx + (p.y() - s.a().y()) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return geometry::distance(p, Point(s.a().x() + t * dx, s.a().y() + t * dy));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RuleOutcome fail(RuleOutcome o, std::string detail) {
  o.passed = false;
  o.detail = std::move(detail);
  return o;
}

RuleOutcome pass(RuleOutcome o, std::string detail) {
  o.passed = true;
  o.detail = std::move(detail);
  o.error_tag.reset();
  return o;
}

std::optional<Point> anchor_point(const GeometrySession& s, const PointAnchor& at,
                                  const Tolerances& tol, std::string& why) {
  if (at.kind == PointAnchor::Kind::kCoordinates) return Point(at.x, at.y);
  std::vector<Point> pts;
  for (const auto& sel : at.points) {
    auto p = first_point(s, sel);
    if (!p) {
      why = "missing reference " + sel.describe();
      return std::nullopt;
    }
    pts.push_back(*p);
  }
  try {
    switch (at.kind) {
      case PointAnchor::Kind::kCircumcenter:
        return geometry::circumcenter(pts[0], pts[1], pts[2], tol);
      case PointAnchor::Kind::kIncenter:
        return geometry::incenter(pts[0], pts[1], pts[2], tol).center;
      case PointAnchor::Kind::kMidpoint:
        return Point(0.5 * (pts[0].x() + pts[1].x()), 0.5 * (pts[0].y() + pts[1].y()));
      case PointAnchor::Kind::kCentroid: {
        double x = 0, y = 0;
        for (const auto& p : pts) {
          x += p.x();
          y += p.y();
        }
        return Point(x / pts.size(), y / pts.size());
      }
      case PointAnchor::Kind::kCoordinates:
        break;
    }
  } catch (const geometry::GeometryError& e) {
    why = std::string("reference points are degenerate: ") + e.what();
  }
  return std::nullopt;
}

RuleOutcome object_exists(const GeometrySession& s, const CgtRule& r, RuleOutcome o) {
  const auto n = matching(s, r.target).size();
  o.measured = static_cast<double>(n);
  if (n == 0) return fail(o, "missing object: " + r.target.describe());
  if (static_cast<int>(n) < r.min_count) {
    return fail(o, "found " + std::to_string(n) + " of " + std::to_string(r.min_count) + " " +
                       r.target.describe());
  }
  return pass(o, "found " + std::to_string(n) + " " + r.target.describe());
}

RuleOutcome point_equidistant(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                              RuleOutcome o) {
  std::vector<std::pair<const SessionObject*, Point>> refs;
  for (const auto& sel : r.references) {
    auto pts = matching_points(s, sel);
    if (pts.empty()) return fail(o, "missing reference " + sel.describe());
    refs.push_back(pts.front());
  }
  const auto candidates = matching_points(s, r.target);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& [obj, p] : candidates) {
    if (std::any_of(refs.begin(), refs.end(), [&](const auto& ref) { return ref.first == obj; })) {
      continue;
    }
    any = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sum = 0.0;
    for (const auto& ref : refs) {
      const double d = geometry::distance(p, ref.second);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
    }
    const double spread = hi - lo;
    const double bound = 2.0 * tol.point + tol.length * (sum / refs.size());
    if (spread <= bound) {
      o.measured = spread;
      return pass(o, obj->id + " is equidistant (spread " + fmt(spread) + ")");
    }
    best = std::min(best, spread);
  }
  if (!any) return fail(o, "missing object: " + r.target.describe());
  o.measured = best;
  return fail(o, "no candidate is equidistant (smallest spread " + fmt(best) + ")");
}

RuleOutcome point_at(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                     RuleOutcome o) {
  std::string why;
  const auto target = anchor_point(s, *r.at, tol, why);
  if (!target) return fail(o, why);
  const auto candidates = matching_points(s, r.target);
  if (candidates.empty()) return fail(o, "missing object: " + r.target.describe());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [obj, p] : candidates) {
    const double d = geometry::distance(p, *target);
    if (d <= tol.point) {
      o.measured = d;
      return pass(o, obj->id + " is at the expected position");
    }
    best = std::min(best, d);
  }
  o.measured = best;
  return fail(o, "nearest candidate is " + fmt(best) + " from the expected position");
}

std::vector<std::pair<const SessionObject*, AngleMeasure>> angles_at_vertex(
    const GeometrySession& s, const CgtRule& r, const Tolerances& tol, std::string& why) {
  auto angles = matching_angles(s, r.target);
  if (!r.vertex) return angles;
  const auto v = first_point(s, *r.vertex);
  if (!v) {
    why = "missing reference " + r.vertex->describe();
    return {};
  }
  std::erase_if(angles, [&](const auto& a) { return !geometry::points_coincide(a.second.vertex(), *v, tol); });
  if (angles.empty()) why = "no angle measured at " + r.vertex->describe();
  return angles;
}

RuleOutcome angle_in_range(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                           RuleOutcome o) {
  std::string why = "missing object: " + r.target.describe();
  const auto angles = angles_at_vertex(s, r, tol, why);
  if (angles.empty()) return fail(o, why);
  for (const auto& [obj, a] : angles) {
    if (a.degrees() > *r.range_min && a.degrees() < *r.range_max) {
      o.measured = a.degrees();
      return pass(o, obj->id + " measures " + fmt(a.degrees()) + " degrees");
    }
  }
  o.measured = angles.front().second.degrees();
  return fail(o, angles.front().first->id + " measures " + fmt(*o.measured) +
                     " degrees, outside (" + fmt(*r.range_min) + ", " + fmt(*r.range_max) + ")");
}

RuleOutcome angle_is_interior(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                              RuleOutcome o) {
  std::string why = "missing object: " + r.target.describe();
  const auto angles = angles_at_vertex(s, r, tol, why);
  if (angles.empty()) return fail(o, why);
  for (const auto& [obj, a] : angles) {
    if (!a.is_reflex()) {
      o.measured = a.degrees();
      return pass(o, obj->id + " is the interior angle");
    }
  }
  const AngleMeasure& a = angles.front().second;
  o.measured = a.degrees();
  if (!r.error_tag) o.error_tag = kReflexTag;
  return fail(o, "reflex measured: " + fmt(a.degrees()) + " degrees where the interior angle is " +
                     fmt(a.interior_degrees()));
}

RuleOutcome length_equals(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                          RuleOutcome o) {
  double expected = 0.0;
  if (r.value) {
    expected = *r.value;
  } else {
    std::optional<double> ref;
    for (const auto& c : matching(s, *r.equals)) {
      if ((ref = measure_of(*c.shape))) break;
    }
    if (!ref) return fail(o, "missing reference " + r.equals->describe());
    expected = *ref;
  }
  const double bound = std::max(tol.point, tol.length * std::abs(expected));
  bool any = false;
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& c : matching(s, r.target)) {
    if (r.equals && r.equals->matches(*c.object)) continue;
    const auto m = measure_of(*c.shape);
    if (!m) continue;
    any = true;
    const double err = std::abs(*m - expected);
    if (err <= bound) {
      o.measured = *m;
      return pass(o, c.object->id + " measures " + fmt(*m));
    }
    if (err < best_err) {
      best_err = err;
      o.measured = *m;
    }
  }
  if (!any) return fail(o, "missing object: " + r.target.describe());
  return fail(o, "closest length " + fmt(*o.measured) + " differs from " + fmt(expected));
}

RuleOutcome point_on_line(const GeometrySession& s, const CgtRule& r, const Tolerances& tol,
                          RuleOutcome o) {
  const Shape* line_shape = nullptr;
  for (const auto& c : matching(s, *r.line)) {
    if (is_line_like(c.object->kind)) {
      line_shape = c.shape;
      break;
    }
  }
  if (!line_shape) return fail(o, "missing reference " + r.line->describe());
  const auto candidates = matching_points(s, r.target);
  if (candidates.empty()) return fail(o, "missing object: " + r.target.describe());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [obj, p] : candidates) {
    const double d = std::holds_alternative<geometry::Segment>(*line_shape)
                         ? distance_to_segment(p, std::get<geometry::Segment>(*line_shape))
                         : std::get<geometry::Line>(*line_shape).distance(p);
    if (d <= tol.point) {
      o.measured = d;
      return pass(o, obj->id + " lies on " + r.line->describe());
    }
    best = std::min(best, d);
  }
  o.measured = best;
  return fail(o, "nearest candidate is " + fmt(best) + " away from " + r.line->describe());
}

RuleOutcome polygon_vertex_count(const GeometrySession& s, const CgtRule& r, RuleOutcome o) {
  bool any = false;
  for (const auto& c : matching(s, r.target)) {
    const auto* poly = std::get_if<geometry::Polygon>(c.shape);
    if (!poly) continue;
    const auto n = static_cast<int>(poly->vertices().size());
    if (!any) o.measured = n;
    any = true;
    if (n == *r.count) {
      o.measured = n;
      return pass(o, c.object->id + " has " + std::to_string(n) + " vertices");
    }
  }
  if (!any) return fail(o, "missing object: " + r.target.describe());
  return fail(o, "polygon has " + fmt(*o.measured) + " vertices, expected " + std::to_string(*r.count));
}

}  // namespace

RuleOutcome evaluate_rule(const GeometrySession& s, const CgtRule& r, std::size_t index,
                          const Tolerances& tol) {
  RuleOutcome o;
  o.index = index;
  o.kind = r.kind;
  o.error_tag = r.error_tag;
  switch (r.kind) {
    case RuleKind::kObjectExists: return object_exists(s, r, o);
    case RuleKind::kPointEquidistant: return point_equidistant(s, r, tol, o);
    case RuleKind::kPointAt: return point_at(s, r, tol, o);
    case RuleKind::kAngleInRange: return angle_in_range(s, r, tol, o);
    case RuleKind::kAngleIsInterior: return angle_is_interior(s, r, tol, o);
    case RuleKind::kLengthEquals: return length_equals(s, r, tol, o);
    case RuleKind::kPointOnLine: return point_on_line(s, r, tol, o);
    case RuleKind::kPolygonVertexCount: return polygon_vertex_count(s, r, o);
  }
  return fail(o, "unknown rule");
}

}  // namespace geograde::detail
