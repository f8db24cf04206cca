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

// Rotation labels under 2D image augmentation, stated in 300W-LP's system
// (X toward image right, Y up, Z out of the image).
//
// Rotating the image counter-clockwise by phi:  R' = Rz(phi) R.
// Flipping about the line L_theta at angle theta from the image x axis:
//   R' = F(theta) R diag(-1, 1, 1),  F = [[cos 2t, sin 2t, 0], [sin 2t, -cos 2t, 0], [0, 0, 1]].

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "headpose/annotations.hpp"
#include "headpose/convert.hpp"
#include "headpose/projection_draw.hpp"

namespace headpose {

namespace detail {

/// sin and cos, exact at multiples of pi/4.
inline std::pair<double, double> exact_sincos(double a) {
  const double k = std::round(a / (kPi / 4.0));
  if (std::abs(a - k * (kPi / 4.0)) < 1e-12) {
    static constexpr double h = 0.70710678118654752440;
    static constexpr std::array<std::pair<double, double>, 8> table{
        {{0.0, 1.0}, {h, h}, {1.0, 0.0}, {h, -h}, {0.0, -1.0}, {-h, -h}, {-1.0, 0.0}, {-h, h}}};
    const auto i = static_cast<std::size_t>(((static_cast<long long>(k) % 8) + 8) % 8);
    return table[i];
  }
  return {std::sin(a), std::cos(a)};
}

inline void check_flip_angle(double theta) {
  if (!std::isfinite(theta) || theta < -1e-12 || theta > kPi / 2.0 + 1e-12)
    throw RangeError("flip line angle " + std::to_string(rad2deg(theta)) + " deg is outside [0, 90]");
}

}  // namespace detail

/// Label of the image rotated counter-clockwise by `phi` radians.
inline RotationMatrix rotate_pose(const RotationMatrix& r, double phi) {
  if (!std::isfinite(phi)) throw InvalidInput("rotation angle must be finite");
  const auto [s, c] = detail::exact_sincos(phi);
  return RotationMatrix::from(Mat3{c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0} * r.matrix());
}

/// Label of the image flipped about L_theta, theta in [0, pi/2].
inline RotationMatrix flip_pose(const RotationMatrix& r, double theta) {
  detail::check_flip_angle(theta);
  const auto [s, c] = detail::exact_sincos(2.0 * theta);
  const Mat3 f{c, s, 0.0, s, -c, 0.0, 0.0, 0.0, 1.0};
  return RotationMatrix::from(f * r.matrix() * Mat3::diag(-1.0, 1.0, 1.0));
}

inline RotationMatrix horizontal_flip(const RotationMatrix& r) { return flip_pose(r, kPi / 2.0); }
inline RotationMatrix vertical_flip(const RotationMatrix& r) { return flip_pose(r, 0.0); }
inline RotationMatrix diagonal_flip(const RotationMatrix& r) { return flip_pose(r, kPi / 4.0); }
inline RotationMatrix rotate_quarter_pi_ccw(const RotationMatrix& r) { return rotate_pose(r, kPi / 4.0); }

/// Flip about both image axes: diag(-1, -1, 1) R.
inline RotationMatrix both_axes_flip(const RotationMatrix& r) {
  return RotationMatrix::from(Mat3::diag(-1.0, -1.0, 1.0) * r.matrix());
}

using PoseOp = std::function<RotationMatrix(const RotationMatrix&)>;

inline std::vector<std::pair<std::string, PoseOp>> corollary_ops() {
  return {{"horizontal_flip", horizontal_flip},
          {"vertical_flip", vertical_flip},
          {"both_axes_flip", both_axes_flip},
          {"diagonal_flip", diagonal_flip},
          {"rotate_quarter_pi_ccw", rotate_quarter_pi_ccw}};
}

struct AugmentOp {
  enum class Kind { Rotate, FlipAboutLine, BothAxesFlip, PixelOnly };

  Kind kind = Kind::PixelOnly;
  double angle = 0.0;  // radians; phi for Rotate, theta for FlipAboutLine

  static AugmentOp rotate(double phi) {
    if (!std::isfinite(phi)) throw InvalidInput("rotation angle must be finite");
    return {Kind::Rotate, phi};
  }
  static AugmentOp flip(double theta) {
    detail::check_flip_angle(theta);
    return {Kind::FlipAboutLine, std::clamp(theta, 0.0, kPi / 2.0)};
  }
  static AugmentOp both_axes() { return {Kind::BothAxesFlip, 0.0}; }
  static AugmentOp pixel_only() { return {Kind::PixelOnly, 0.0}; }

  RotationMatrix apply(const RotationMatrix& r) const {
    switch (kind) {
      case Kind::Rotate:
        return rotate_pose(r, angle);
      case Kind::FlipAboutLine:
        return flip_pose(r, angle);
      case Kind::BothAxesFlip:
        return both_axes_flip(r);
      case Kind::PixelOnly:
        break;
    }
    return r;
  }

  /// Image of a pixel position under the op, about the centre of a width x height image
  /// (x right, y down).
  Point2 apply(Point2 p, double width, double height) const {
    const double cx = width / 2.0, cy = height / 2.0;
    const double dx = p.x - cx, dy = p.y - cy;
    switch (kind) {
      case Kind::Rotate: {
        const auto [s, c] = detail::exact_sincos(angle);
        return {cx + dx * c + dy * s, cy - dx * s + dy * c};
      }
      case Kind::FlipAboutLine: {
        const auto [s, c] = detail::exact_sincos(2.0 * angle);
        return {cx + c * dx - s * dy, cy - s * dx - c * dy};
      }
      case Kind::BothAxesFlip:
        return {cx - dx, cy - dy};
      case Kind::PixelOnly:
        break;
    }
    return p;
  }
};

/// A flip about L_theta for any theta (radians), as ops with theta in [0, pi/2]:
/// theta in (pi/2, pi) becomes flip(theta - pi/2) followed by a rotation by pi.
inline std::vector<AugmentOp> reduce_flip(double theta) {
  if (!std::isfinite(theta)) throw InvalidInput("flip angle must be finite");
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t > kPi - 1e-12) t = 0.0;
  if (t <= kPi / 2.0 + 1e-12) return {AugmentOp::flip(std::min(t, kPi / 2.0))};
  return {AugmentOp::flip(t - kPi / 2.0), AugmentOp::rotate(kPi)};
}

/// Axis-aligned box around the transformed corners of `b`, clipped to the image.
inline BBox transform_bbox(const BBox& b, const AugmentOp& op, double width, double height) {
  const std::array<Point2, 4> corners{
      {{b.x, b.y}, {b.x + b.w, b.y}, {b.x, b.y + b.h}, {b.x + b.w, b.y + b.h}}};
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (const auto& c : corners) {
    const auto q = op.apply(c, width, height);
    x0 = std::min(x0, q.x);
    y0 = std::min(y0, q.y);
    x1 = std::max(x1, q.x);
    y1 = std::max(y1, q.y);
  }
  x0 = std::clamp(x0, 0.0, width);
  x1 = std::clamp(x1, 0.0, width);
  y0 = std::clamp(y0, 0.0, height);
  y1 = std::clamp(y1, 0.0, height);
  if (!(x1 - x0 > 0.0) || !(y1 - y0 > 0.0))
    throw DegenerateGeometry("bounding box collapses after augmentation");
  return {x0, y0, x1 - x0, y1 - y0};
}

/// Applies `op` to the label and bounding box of `ann`. Labels outside W300LP are
/// moved there and back through the basis registry. The Euler cache is
/// re-extracted, and dropped if it no longer reconstructs the rotation.
inline PoseAnnotation augment_annotation(const PoseAnnotation& ann, const AugmentOp& op, double width,
                                         double height,
                                         const ConventionRegistry& reg = ConventionRegistry::builtin(),
                                         const BasisRegistry& basis = BasisRegistry::builtin()) {
  if (op.kind == AugmentOp::Kind::PixelOnly) return ann;
  if (!(width > 0.0) || !(height > 0.0)) throw InvalidInput("image size must be positive");
  if (ann.bbox) {
    const auto& b = *ann.bbox;
    const double eps = 1e-9;
    if (b.x < -eps || b.y < -eps || b.x + b.w > width + eps || b.y + b.h > height + eps)
      throw InvalidInput("bounding box of " + ann.image_id + " lies outside the image");
  }
  const auto conv = reg.find(ann.source_convention);
  const auto to_w = basis.find(conv->name, "W300LP");

  PoseAnnotation out = ann;
  out.rotation = convert_rotation(op.apply(convert_rotation(ann.rotation, to_w)), to_w.inverse());
  if (ann.bbox) out.bbox = transform_bbox(*ann.bbox, op, width, height);

  out.euler_cache.reset();
  const auto res = extract(out.rotation, conv);
  std::optional<EulerAngles> e = select_in_ranges(res, conv);
  if (e && frobenius_distance(sequence_product(conv->sequence, e->pitch, e->yaw, e->roll), out.rotation) <= 1e-9)
    out.euler_cache = e;
  return out;
}

}  // namespace headpose
