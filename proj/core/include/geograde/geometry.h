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

#ifndef GEOGRADE_GEOMETRY_H_
#define GEOGRADE_GEOMETRY_H_

#include <string>
#include <utility>
#include <vector>

#include "geograde/error.h"

// Tolerance-aware planar geometry used to validate student constructions.
// Every type is immutable after construction and every function is pure.
// Coordinates are abstract workspace units; orientation (y-up or y-down) is
// irrelevant to every predicate here.
namespace geograde::geometry {

enum class GeometryErrc {
  kNonFinite,
  kDegenerate,
  kParallel,
  kCoincident,
  kCollinear,
  kDegenerateRay,
  kOutOfRange,
};

class GeometryError : public Error {
 public:
  GeometryError(GeometryErrc errc, const std::string& message);
  GeometryErrc errc() const noexcept { return errc_; }

 private:
  GeometryErrc errc_;
};

// point: coincidence distance (absolute). length: relative length
// comparison. angle_deg: angle comparison in degrees.
struct Tolerances {
  double point = 1e-6;
  double length = 1e-6;
  double angle_deg = 0.5;

  // Throws GeometryError(kOutOfRange) unless all three are finite and > 0.
  void validate() const;
};

class Point {
 public:
  Point(double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  double x_;
  double y_;
};

class Segment {
 public:
  // Rejects endpoints closer than tol.point.
  Segment(Point a, Point b, const Tolerances& tol = {});

  const Point& a() const noexcept { return a_; }
  const Point& b() const noexcept { return b_; }
  double length() const;

 private:
  Point a_;
  Point b_;
};

// A*x + B*y + C = 0 with A^2 + B^2 = 1 and (A, B) lexicographically
// non-negative, so each geometric line has exactly one representation.
class Line {
 public:
  static Line from_coefficients(double a, double b, double c);
  static Line through(const Point& p, const Point& q, const Tolerances& tol = {});

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

  // Signed distance of p from the line (sign follows the canonical normal).
  double signed_distance(const Point& p) const;
  double distance(const Point& p) const;

 private:
  Line(double a, double b, double c) : a_(a), b_(b), c_(c) {}
  double a_;
  double b_;
  double c_;
};

class Circle {
 public:
  Circle(Point center, double radius, const Tolerances& tol = {});

  const Point& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

 private:
  Point center_;
  double radius_;
};

class Polygon {
 public:
  // At least three vertices; consecutive vertices (including last->first)
  // must be farther apart than tol.point.
  explicit Polygon(std::vector<Point> vertices, const Tolerances& tol = {});

  const std::vector<Point>& vertices() const noexcept { return vertices_; }

 private:
  std::vector<Point> vertices_;
};

// A measured angle at `vertex` between the rays towards `ray1_to` and
// `ray2_to`. The recorded degrees must equal either the interior angle or
// its reflex complement within tol.angle_deg.
class AngleMeasure {
 public:
  AngleMeasure(Point ray1_to, Point vertex, Point ray2_to, double degrees,
               const Tolerances& tol = {});

  const Point& ray1_to() const noexcept { return ray1_to_; }
  const Point& vertex() const noexcept { return vertex_; }
  const Point& ray2_to() const noexcept { return ray2_to_; }
  double degrees() const noexcept { return degrees_; }
  // Interior angle of the stored points.
  double interior_degrees() const noexcept { return interior_; }
  // True when the recorded degrees are nearer the reflex angle.
  bool is_reflex() const;

 private:
  Point ray1_to_;
  Point vertex_;
  Point ray2_to_;
  double degrees_;
  double interior_;
};

enum class TriangleClass { kAcute, kRight, kObtuse };
std::string to_string(TriangleClass t);

double distance(const Point& p, const Point& q);
Point midpoint(const Segment& s);
Line perpendicular_bisector(const Segment& s);
Line perpendicular_bisector(const Point& a, const Point& b, const Tolerances& tol = {});
Point line_intersection(const Line& l1, const Line& l2, const Tolerances& tol = {});
Point circumcenter(const Point& a, const Point& b, const Point& c,
                   const Tolerances& tol = {});

struct Incircle {
  Point center;
  double radius;
};
Incircle incenter(const Point& a, const Point& b, const Point& c,
                  const Tolerances& tol = {});

// Non-reflex angle at b between rays b->c and b->a, in degrees, strictly
// inside (0, 180). Argument order mirrors the name "angle CBA". Collinear
// rays (0 or 180 degrees) are reported as kCollinear.
double interior_angle(const Point& c, const Point& b, const Point& a,
                      const Tolerances& tol = {});
double reflex_complement(double angle_deg);
TriangleClass classify_triangle(const Point& a, const Point& b, const Point& c,
                                const Tolerances& tol = {});
bool points_coincide(const Point& p, const Point& q, const Tolerances& tol = {});

// True when a, b, c are too close to a line to span a triangle: the smallest
// altitude is at most tol.point.
bool collinear(const Point& a, const Point& b, const Point& c,
               const Tolerances& tol = {});

}  // namespace geograde::geometry

#endif  // GEOGRADE_GEOMETRY_H_
