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

#include "geograde/geometry.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace geograde::geometry {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRadToDeg = 180.0 / kPi;
// Below this the determinant of two unit normals is treated as zero.
constexpr double kParallelEps = 1e-12;

const char* errc_code(GeometryErrc e) {
  switch (e) {
    case GeometryErrc::kNonFinite: return "NON_FINITE";
    case GeometryErrc::kDegenerate: return "DEGENERATE";
    case GeometryErrc::kParallel: return "PARALLEL";
    case GeometryErrc::kCoincident: return "COINCIDENT";
    case GeometryErrc::kCollinear: return "COLLINEAR";
    case GeometryErrc::kDegenerateRay: return "DEGENERATE_RAY";
    case GeometryErrc::kOutOfRange: return "OUT_OF_RANGE";
  }
  return "GEOMETRY";
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Twice the signed area of triangle abc.
double area2(const Point& a, const Point& b, const Point& c) {
  return cross(b.x() - a.x(), b.y() - a.y(), c.x() - a.x(), c.y() - a.y());
}

void require_triangle(const Point& a, const Point& b, const Point& c,
                      const Tolerances& tol) {
  if (collinear(a, b, c, tol)) {
    throw GeometryError(GeometryErrc::kCollinear, "points are collinear");
  }
}

}  // namespace

GeometryError::GeometryError(GeometryErrc errc, const std::string& message)
    : Error(errc_code(errc), message), errc_(errc) {}

void Tolerances::validate() const {
  for (double v : {point, length, angle_deg}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw GeometryError(GeometryErrc::kOutOfRange,
                          "tolerances must be finite and strictly positive");
    }
  }
}

Point::Point(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw GeometryError(GeometryErrc::kNonFinite, "point coordinates must be finite");
  }
}

Segment::Segment(Point a, Point b, const Tolerances& tol) : a_(a), b_(b) {
  if (distance(a, b) <= tol.point) {
    throw GeometryError(GeometryErrc::kDegenerate, "segment endpoints coincide");
  }
}

double Segment::length() const { return distance(a_, b_); }

Line Line::from_coefficients(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw GeometryError(GeometryErrc::kNonFinite, "line coefficients must be finite");
  }
  const double norm = std::hypot(a, b);
  if (norm == 0.0) {
    throw GeometryError(GeometryErrc::kDegenerate, "line normal is zero");
  }
  a /= norm;
  b /= norm;
  c /= norm;
  if (std::abs(a) < kParallelEps) a = 0.0;
  if (std::abs(b) < kParallelEps) b = 0.0;
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  // Keep the unit-norm invariant exact after zeroing.
  if (a == 0.0) b = 1.0;
  if (b == 0.0) a = 1.0;
  if (c == 0.0) c = 0.0;  // fold -0.0
  return Line(a, b, c);
}

Line Line::through(const Point& p, const Point& q, const Tolerances& tol) {
  if (geometry::distance(p, q) <= tol.point) {
    throw GeometryError(GeometryErrc::kDegenerate, "line needs two distinct points");
  }
  const double a = q.y() - p.y();
  const double b = p.x() - q.x();
  // Use the midpoint for C: symmetric in p and q, so swapping them gives the
  // same canonical line bit for bit.
  const double mx = 0.5 * (p.x() + q.x());
  const double my = 0.5 * (p.y() + q.y());
  return from_coefficients(a, b, -(a * mx + b * my));
}

double Line::signed_distance(const Point& p) const {
  return a_ * p.x() + b_ * p.y() + c_;
}

double Line::distance(const Point& p) const { return std::abs(signed_distance(p)); }

Circle::Circle(Point center, double radius, const Tolerances& tol)
    : center_(center), radius_(radius) {
  if (!std::isfinite(radius)) {
    throw GeometryError(GeometryErrc::kNonFinite, "radius must be finite");
  }
  if (radius <= tol.point) {
    throw GeometryError(GeometryErrc::kDegenerate, "radius must exceed the point tolerance");
  }
}

Polygon::Polygon(std::vector<Point> vertices, const Tolerances& tol)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw GeometryError(GeometryErrc::kDegenerate, "polygon needs at least 3 vertices");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point& p = vertices_[i];
    const Point& q = vertices_[(i + 1) % vertices_.size()];
    if (distance(p, q) <= tol.point) {
      throw GeometryError(GeometryErrc::kDegenerate, "consecutive polygon vertices coincide");
    }
  }
}

AngleMeasure::AngleMeasure(Point ray1_to, Point vertex, Point ray2_to, double degrees,
                           const Tolerances& tol)
    : ray1_to_(ray1_to), vertex_(vertex), ray2_to_(ray2_to), degrees_(degrees) {
  if (!std::isfinite(degrees) || degrees <= 0.0 || degrees >= 360.0) {
    throw GeometryError(GeometryErrc::kOutOfRange, "angle measure must lie in (0, 360)");
  }
  interior_ = interior_angle(ray1_to, vertex, ray2_to, tol);
  if (std::abs(degrees - interior_) > tol.angle_deg &&
      std::abs(degrees - reflex_complement(interior_)) > tol.angle_deg) {
    throw GeometryError(GeometryErrc::kDegenerate,
                        "angle measure disagrees with its points");
  }
}

bool AngleMeasure::is_reflex() const {
  return std::abs(degrees_ - reflex_complement(interior_)) <
         std::abs(degrees_ - interior_);
}

std::string to_string(TriangleClass t) {
  switch (t) {
    case TriangleClass::kAcute: return "ACUTE";
    case TriangleClass::kRight: return "RIGHT";
    case TriangleClass::kObtuse: return "OBTUSE";
  }
  return "UNKNOWN";
}

double distance(const Point& p, const Point& q) {
  return std::hypot(q.x() - p.x(), q.y() - p.y());
}

Point midpoint(const Segment& s) {
  return Point(0.5 * (s.a().x() + s.b().x()), 0.5 * (s.a().y() + s.b().y()));
}

Line perpendicular_bisector(const Segment& s) {
  const Point m = midpoint(s);
  const double dx = s.b().x() - s.a().x();
  const double dy = s.b().y() - s.a().y();
  // The segment direction is the bisector's normal.
  return Line::from_coefficients(dx, dy, -(dx * m.x() + dy * m.y()));
}

Line perpendicular_bisector(const Point& a, const Point& b, const Tolerances& tol) {
  return perpendicular_bisector(Segment(a, b, tol));
}

Point line_intersection(const Line& l1, const Line& l2, const Tolerances& tol) {
  const double det = l1.a() * l2.b() - l2.a() * l1.b();
  if (std::abs(det) <= kParallelEps) {
    // Canonical normals are equal when parallel, so C alone decides.
    if (std::abs(l1.c() - l2.c()) <= tol.point) {
      throw GeometryError(GeometryErrc::kCoincident, "lines coincide");
    }
    throw GeometryError(GeometryErrc::kParallel, "lines are parallel");
  }
  const double x = (l1.b() * l2.c() - l2.b() * l1.c()) / det;
  const double y = (l2.a() * l1.c() - l1.a() * l2.c()) / det;
  return Point(x, y);
}

bool collinear(const Point& a, const Point& b, const Point& c, const Tolerances& tol) {
  const double longest = std::max({distance(a, b), distance(b, c), distance(c, a)});
  if (longest <= tol.point) return true;
  return std::abs(area2(a, b, c)) / longest <= tol.point;
}

Point circumcenter(const Point& a, const Point& b, const Point& c,
                   const Tolerances& tol) {
  require_triangle(a, b, c, tol);
  // Work relative to a to limit cancellation.
  const double bx = b.x() - a.x();
  const double by = b.y() - a.y();
  const double cx = c.x() - a.x();
  const double cy = c.y() - a.y();
  const double d = 2.0 * cross(bx, by, cx, cy);
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d;
  const double uy = (bx * c2 - cx * b2) / d;
  return Point(a.x() + ux, a.y() + uy);
}

Incircle incenter(const Point& a, const Point& b, const Point& c, const Tolerances& tol) {
  require_triangle(a, b, c, tol);
  const double la = distance(b, c);
  const double lb = distance(c, a);
  const double lc = distance(a, b);
  const double p = la + lb + lc;
  const Point center((la * a.x() + lb * b.x() + lc * c.x()) / p,
                     (la * a.y() + lb * b.y() + lc * c.y()) / p);
  return {center, std::abs(area2(a, b, c)) / p};
}

double interior_angle(const Point& c, const Point& b, const Point& a,
                      const Tolerances& tol) {
  if (distance(b, c) <= tol.point || distance(b, a) <= tol.point) {
    throw GeometryError(GeometryErrc::kDegenerateRay, "angle ray has zero length");
  }
  const double ux = c.x() - b.x();
  const double uy = c.y() - b.y();
  const double vx = a.x() - b.x();
  const double vy = a.y() - b.y();
  const double s = std::abs(cross(ux, uy, vx, vy));
  const double d = ux * vx + uy * vy;
  if (s <= kParallelEps * std::hypot(ux, uy) * std::hypot(vx, vy)) {
    throw GeometryError(GeometryErrc::kCollinear, "angle rays are collinear");
  }
  return std::atan2(s, d) * kRadToDeg;
}

double reflex_complement(double angle_deg) {
  if (!std::isfinite(angle_deg) || angle_deg <= 0.0 || angle_deg >= 360.0) {
    throw GeometryError(GeometryErrc::kOutOfRange, "angle must lie in (0, 360)");
  }
  return 360.0 - angle_deg;
}

TriangleClass classify_triangle(const Point& a, const Point& b, const Point& c,
                                const Tolerances& tol) {
  require_triangle(a, b, c, tol);
  const std::array<double, 3> angles = {interior_angle(c, a, b, tol),
                                        interior_angle(a, b, c, tol),
                                        interior_angle(b, c, a, tol)};
  const double largest = *std::max_element(angles.begin(), angles.end());
  if (std::abs(largest - 90.0) <= tol.angle_deg) return TriangleClass::kRight;
  if (largest > 90.0 + tol.angle_deg) return TriangleClass::kObtuse;
  return TriangleClass::kAcute;
}

bool points_coincide(const Point& p, const Point& q, const Tolerances& tol) {
  return distance(p, q) <= tol.point;
}

}  // namespace geograde::geometry
