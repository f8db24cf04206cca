// Copyright 2026 The headpose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Three-line and pose-cube drawing.
//
// Image coordinates: x right, y down, origin top-left. Camera intrinsics are
// ignored; lines are orthographic projections of the rotated unit axes.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "headpose/convert.hpp"
#include "json.hpp"

namespace headpose {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point2&) const = default;
  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// Endpoints of the red (x), green (y) and blue (z) lines.
struct LineProjection {
  Point2 origin;
  Point2 x_axis_end;
  Point2 y_axis_end;
  Point2 z_axis_end;
  double size = 0.0;
};

enum class CubeCorner {
  Face,      // (face_x, face_y)
  X,         // p1
  Y,         // p2
  XY,        // p1 + p2 - face
  Z,         // p3
  XZ,        // p3 + p1 - face
  YZ,        // p3 + p2 - face
  XYZ,       // p1 + p2 + p3 - 2 face
};

enum class EdgeColor { Red, Green, Blue };

struct CubeEdge {
  CubeCorner a;
  CubeCorner b;
  EdgeColor color;
};

/// The 12 edges in drawing order: red base, blue pillars, green top.
inline constexpr std::array<CubeEdge, 12> kCubeEdges{{
    {CubeCorner::Face, CubeCorner::X, EdgeColor::Red},
    {CubeCorner::Face, CubeCorner::Y, EdgeColor::Red},
    {CubeCorner::Y, CubeCorner::XY, EdgeColor::Red},
    {CubeCorner::X, CubeCorner::XY, EdgeColor::Red},
    {CubeCorner::Face, CubeCorner::Z, EdgeColor::Blue},
    {CubeCorner::X, CubeCorner::XZ, EdgeColor::Blue},
    {CubeCorner::Y, CubeCorner::YZ, EdgeColor::Blue},
    {CubeCorner::XY, CubeCorner::XYZ, EdgeColor::Blue},
    {CubeCorner::XZ, CubeCorner::XYZ, EdgeColor::Green},
    {CubeCorner::YZ, CubeCorner::XYZ, EdgeColor::Green},
    {CubeCorner::Z, CubeCorner::XZ, EdgeColor::Green},
    {CubeCorner::Z, CubeCorner::YZ, EdgeColor::Green},
}};

struct CubeProjection {
  std::array<Point2, 8> corners{};

  const Point2& operator[](CubeCorner c) const { return corners[static_cast<std::size_t>(c)]; }
  Point2& operator[](CubeCorner c) { return corners[static_cast<std::size_t>(c)]; }
};

/// T_W R T_W with T_W = diag(1, -1, 1): 300W-LP's frame with Y pointing down.
inline RotationMatrix draw_transform_300wlp(const RotationMatrix& r) {
  const Mat3 t = Mat3::diag(1.0, -1.0, 1.0);
  return RotationMatrix::from(t * r.matrix() * t);
}

/// T_S R T_S with T_S = diag(1, 1, -1): SciPy's frame with Z pointing down.
inline RotationMatrix draw_transform_wiki(const RotationMatrix& r) {
  const Mat3 t = Mat3::diag(1.0, 1.0, -1.0);
  return RotationMatrix::from(t * r.matrix() * t);
}

namespace detail {

inline void check_size(double size) {
  if (!(size > 0.0) || !std::isfinite(size)) throw InvalidInput("drawing size must be positive");
}

inline LineProjection lines_from_offsets(Point2 origin, double size, Point2 x, Point2 y, Point2 z) {
  return {origin, origin + x * size, origin + y * size, origin + z * size, size};
}

}  // namespace detail

/// XY projection of the columns of T_W R T_W; `r` is in 300W-LP's frame.
inline LineProjection three_line_endpoints_300wlp(const RotationMatrix& r, Point2 origin, double size) {
  detail::check_size(size);
  const Mat3 d = draw_transform_300wlp(r).matrix();
  return detail::lines_from_offsets(origin, size, {d(0, 0), d(1, 0)}, {d(0, 1), d(1, 1)},
                                    {d(0, 2), d(1, 2)});
}

/// YZ projection of the columns of T_S R T_S; `r` is in SciPy's frame.
/// Red is the Y column, green the (flipped) Z column, blue the X (nose) column.
inline LineProjection three_line_endpoints_wiki(const RotationMatrix& r, Point2 origin, double size) {
  detail::check_size(size);
  const Mat3 d = draw_transform_wiki(r).matrix();
  return detail::lines_from_offsets(origin, size, {d(1, 1), d(2, 1)}, {d(1, 2), d(2, 2)},
                                    {d(1, 0), d(2, 0)});
}

/// Dispatches on the frame of `convention`. Conventions other than WIKI_ZYX are
/// moved to W300LP through the basis registry first.
inline LineProjection three_line_endpoints(const RotationMatrix& r, const RotationConvention& convention,
                                           Point2 origin, double size,
                                           const BasisRegistry& reg = BasisRegistry::builtin()) {
  if (convention.name == "WIKI_ZYX") return three_line_endpoints_wiki(r, origin, size);
  if (!reg.contains(convention.name, "W300LP"))
    throw Unsupported("no drawing frame known for convention " + convention.name);
  return three_line_endpoints_300wlp(convert_rotation(r, reg.find(convention.name, "W300LP")), origin,
                                     size);
}

/// The community draw_axis routine, angles in degrees, transcribed as published
/// (including its negated yaw).
inline LineProjection draw_axis_reference(double pitch, double yaw, double roll, Point2 origin,
                                          double size = 100.0) {
  pitch = pitch * kPi / 180.0;
  yaw = -(yaw * kPi / 180.0);
  roll = roll * kPi / 180.0;
  const double tdx = origin.x, tdy = origin.y;
  using std::cos, std::sin;

  const double x1 = size * (cos(yaw) * cos(roll)) + tdx;
  const double y1 = size * (cos(pitch) * sin(roll) + cos(roll) * sin(pitch) * sin(yaw)) + tdy;

  const double x2 = size * (-cos(yaw) * sin(roll)) + tdx;
  const double y2 = size * (cos(pitch) * cos(roll) - sin(pitch) * sin(yaw) * sin(roll)) + tdy;

  const double x3 = size * (sin(yaw)) + tdx;
  const double y3 = size * (-cos(yaw) * sin(pitch)) + tdy;

  return {origin, {x1, y1}, {x2, y2}, {x3, y3}, size};
}

/// Cube on three projected edge vectors, spanned from `face`.
inline CubeProjection cube_from_axes(Point2 face, Point2 p1, Point2 p2, Point2 p3) {
  CubeProjection c;
  c[CubeCorner::Face] = face;
  c[CubeCorner::X] = p1;
  c[CubeCorner::Y] = p2;
  c[CubeCorner::XY] = p1 + p2 - face;
  c[CubeCorner::Z] = p3;
  c[CubeCorner::XZ] = p3 + p1 - face;
  c[CubeCorner::YZ] = p3 + p2 - face;
  c[CubeCorner::XYZ] = p3 + p1 + p2 - face * 2.0;
  return c;
}

/// The community plot_pose_cube construction (degrees); the face corner sits at
/// origin - size/2 in both coordinates.
inline CubeProjection pose_cube_endpoints(double pitch, double yaw, double roll, Point2 origin,
                                          double size = 150.0) {
  const double p = pitch * kPi / 180.0;
  const double y = -(yaw * kPi / 180.0);
  const double r = roll * kPi / 180.0;
  const double face_x = origin.x - 0.50 * size;
  const double face_y = origin.y - 0.50 * size;
  using std::cos, std::sin;

  const double x1 = size * (cos(y) * cos(r)) + face_x;
  const double y1 = size * (cos(p) * sin(r) + cos(r) * sin(p) * sin(y)) + face_y;
  const double x2 = size * (-cos(y) * sin(r)) + face_x;
  const double y2 = size * (cos(p) * cos(r) - sin(p) * sin(y) * sin(r)) + face_y;
  const double x3 = size * (sin(y)) + face_x;
  const double y3 = size * (-cos(y) * sin(p)) + face_y;
  return cube_from_axes({face_x, face_y}, {x1, y1}, {x2, y2}, {x3, y3});
}

/// Pose cube from a rotation matrix.
inline CubeProjection pose_cube(const RotationMatrix& r, const RotationConvention& convention,
                                Point2 origin, double size = 150.0) {
  const Point2 face = origin - Point2{size / 2.0, size / 2.0};
  const auto l = three_line_endpoints(r, convention, face, size);
  return cube_from_axes(face, l.x_axis_end, l.y_axis_end, l.z_axis_end);
}

// ---------------------------------------------------------------------------
// Output

inline const char* color_hex(EdgeColor c) {
  switch (c) {
    case EdgeColor::Red:
      return "#FF0000";
    case EdgeColor::Green:
      return "#00FF00";
    case EdgeColor::Blue:
      return "#0000FF";
  }
  return "#000000";
}

namespace detail {

inline std::string svg_line(Point2 a, Point2 b, EdgeColor color) {
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                "stroke-width=\"4\"/>\n",
                a.x, a.y, b.x, b.y, color_hex(color));
  return buf;
}

inline std::string svg_document(int width, int height, const std::string& body) {
  if (width <= 0 || height <= 0) throw InvalidInput("image size must be positive");
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n" + body + "</svg>\n";
}

}  // namespace detail

inline std::string emit_svg(const LineProjection& p, int width, int height) {
  if (!p.origin.finite() || !p.x_axis_end.finite() || !p.y_axis_end.finite() || !p.z_axis_end.finite())
    throw InvalidInput("projection has non-finite coordinates");
  return detail::svg_document(width, height,
                              detail::svg_line(p.origin, p.x_axis_end, EdgeColor::Red) +
                                  detail::svg_line(p.origin, p.y_axis_end, EdgeColor::Green) +
                                  detail::svg_line(p.origin, p.z_axis_end, EdgeColor::Blue));
}

inline std::string emit_svg(const CubeProjection& c, int width, int height) {
  std::string body;
  for (const auto& pt : c.corners)
    if (!pt.finite()) throw InvalidInput("projection has non-finite coordinates");
  for (const auto& e : kCubeEdges) body += detail::svg_line(c[e.a], c[e.b], e.color);
  return detail::svg_document(width, height, body);
}

inline nlohmann::json to_json(const LineProjection& p) {
  const auto pt = [](Point2 q) { return nlohmann::json::array({q.x, q.y}); };
  return {{"origin", pt(p.origin)}, {"x", pt(p.x_axis_end)}, {"y", pt(p.y_axis_end)},
          {"z", pt(p.z_axis_end)}};
}

}  // namespace headpose
