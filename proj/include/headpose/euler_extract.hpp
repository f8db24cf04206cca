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

// Closed-form Euler extraction.
//
// Away from gimbal lock a Tait-Bryan rotation has exactly two angle triples in
// (-pi, pi]^3; both are returned, the one whose middle angle lies in
// [-pi/2, pi/2] first. At gimbal lock only a sum or difference of the outer
// angles is determined; a canonical equal split is returned and flagged.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "headpose/conventions.hpp"
#include "headpose/so3.hpp"

namespace headpose {

/// |cos(middle angle)| below which extraction takes the gimbal branch.
/// Equivalent to |sin(middle)| > 1 - 1e-7.
inline const double kGimbalCosThreshold = std::sqrt(2e-7);

/// At gimbal lock: first + sign * second = value (radians).
struct GimbalConstraint {
  AngleRole first = AngleRole::Pitch;
  AngleRole second = AngleRole::Roll;
  int sign = 1;  // +1 sum, -1 difference
  double value = 0.0;

  std::string describe() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %c %s = %.12f deg determined, split conventional",
                  std::string(role_name(first)).c_str(), sign > 0 ? '+' : '-',
                  std::string(role_name(second)).c_str(), rad2deg(value));
    return buf;
  }
};

struct ExtractionResult {
  EulerAngles primary;
  std::optional<EulerAngles> secondary;
  bool gimbal_lock = false;
  std::optional<GimbalConstraint> constraint;
  std::optional<std::string> constraint_note;
};

namespace detail {

/// Maps -pi to pi; everything else in [-pi, pi] is left alone.
inline double canonical(double a) { return a <= -kPi ? kPi : a; }

/// The other solution of an outer angle: differs by pi, stays in (-pi, pi].
inline double flip_by_pi(double a) { return canonical(a > 0.0 ? a - kPi : a + kPi); }

/// The other solution of the middle angle: pi - b or -pi - b.
inline double second_middle(double b) { return canonical(b >= 0.0 ? kPi - b : -kPi - b); }

inline EulerAngles tag(double p, double y, double r, const ConventionPtr& c) {
  return {canonical(p), canonical(y), canonical(r), c};
}

inline ExtractionResult gimbal_result(double p, double y, double r, const ConventionPtr& c,
                                      GimbalConstraint gc) {
  ExtractionResult out;
  out.primary = tag(p, y, r, c);
  out.gimbal_lock = true;
  out.constraint = gc;
  out.constraint_note = gc.describe();
  return out;
}

inline ExtractionResult retag(ExtractionResult r, const ConventionPtr& c) {
  r.primary.convention = c;
  if (r.secondary) r.secondary->convention = c;
  return r;
}

}  // namespace detail

/// 300W-LP's system: R = Rx_left(p) Ry_left(y) Rz_left(r).
inline ExtractionResult extract_300wlp(const RotationMatrix& rot) {
  const auto& R = rot.matrix();
  const auto& conv = w300lp();
  const double cos_yaw = std::hypot(R(1, 2), R(2, 2));
  if (cos_yaw < kGimbalCosThreshold) {
    if (-R(0, 2) > 0.0) {
      const double diff = std::atan2(R(1, 0), R(1, 1));  // p - r
      const double p = diff / 2.0;
      return detail::gimbal_result(p, kPi / 2.0, -p, conv,
                                   {AngleRole::Pitch, AngleRole::Roll, -1, diff});
    }
    const double sum = std::atan2(-R(1, 0), R(1, 1));  // p + r
    return detail::gimbal_result(sum / 2.0, -kPi / 2.0, sum / 2.0, conv,
                                 {AngleRole::Pitch, AngleRole::Roll, +1, sum});
  }
  const double y1 = std::asin(std::clamp(-R(0, 2), -1.0, 1.0));
  const double cy1 = std::cos(y1);
  const double p1 = std::atan2(R(1, 2) / cy1, R(2, 2) / cy1);
  const double r1 = std::atan2(R(0, 1) / cy1, R(0, 0) / cy1);
  ExtractionResult out;
  out.primary = detail::tag(p1, y1, r1, conv);
  out.secondary = detail::tag(detail::flip_by_pi(p1), detail::second_middle(y1), detail::flip_by_pi(r1), conv);
  return out;
}

inline ExtractionResult extract_300wlp(const Mat3& m) { return extract_300wlp(RotationMatrix::from(m)); }

/// SciPy / Wikipedia system: R = Rz(y) Ry(p) Rx(r), pivoting on R[2,0] = -sin(p).
inline ExtractionResult extract_wiki_zyx(const RotationMatrix& rot) {
  const auto& R = rot.matrix();
  const auto& conv = wiki_zyx();
  const double cos_pitch = std::hypot(R(2, 1), R(2, 2));
  if (cos_pitch < kGimbalCosThreshold) {
    if (R(2, 0) < 0.0) {
      const double diff = std::atan2(R(0, 1), R(0, 2));  // r - y
      const double r = diff / 2.0;
      return detail::gimbal_result(kPi / 2.0, -r, r, conv,
                                   {AngleRole::Roll, AngleRole::Yaw, -1, diff});
    }
    const double sum = std::atan2(-R(0, 1), -R(0, 2));  // y + r
    return detail::gimbal_result(-kPi / 2.0, sum / 2.0, sum / 2.0, conv,
                                 {AngleRole::Yaw, AngleRole::Roll, +1, sum});
  }
  const double p1 = -std::asin(std::clamp(R(2, 0), -1.0, 1.0));
  const double cp1 = std::cos(p1);
  const double r1 = std::atan2(R(2, 1) / cp1, R(2, 2) / cp1);
  const double y1 = std::atan2(R(1, 0) / cp1, R(0, 0) / cp1);
  ExtractionResult out;
  out.primary = detail::tag(p1, y1, r1, conv);
  out.secondary = detail::tag(detail::second_middle(p1), detail::flip_by_pi(y1), detail::flip_by_pi(r1), conv);
  return out;
}

inline ExtractionResult extract_wiki_zyx(const Mat3& m) { return extract_wiki_zyx(RotationMatrix::from(m)); }

/// Any Tait-Bryan convention, from the parity-signed entry pattern
///   R[a][c] = e sin(b),  R[b][c] = -e sin(a) cos(b),  R[c][c] = cos(a) cos(b),
///   R[a][b] = -e cos(b) sin(g),  R[a][a] = cos(b) cos(g)
/// of R = Ea(a) Eb(b) Ec(g) (right-handed angles; e = +1 for cyclic axis order).
/// Left-handed factors are right-handed factors of the negated angle.
inline ExtractionResult extract_tait_bryan(const RotationMatrix& rot, const ConventionPtr& conv) {
  if (!conv) throw InvalidInput("extraction needs a convention");
  conv->validate();
  const auto& seq = conv->sequence;
  const auto& R = rot.matrix();
  const int a = index(seq[0].axis), b = index(seq[1].axis), c = index(seq[2].axis);
  const double e = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
  const auto sgn = [](Handedness h) { return h == Handedness::Right ? 1.0 : -1.0; };
  const double s0 = sgn(seq[0].handedness), s1 = sgn(seq[1].handedness), s2 = sgn(seq[2].handedness);

  const auto assemble = [&](double t0, double t1, double t2) {
    EulerAngles out{0.0, 0.0, 0.0, conv};
    out.angle(seq[0].role) = detail::canonical(s0 * t0);
    out.angle(seq[1].role) = detail::canonical(s1 * t1);
    out.angle(seq[2].role) = detail::canonical(s2 * t2);
    return out;
  };

  const double cos_mid = std::hypot(R(b, c), R(c, c));
  if (cos_mid < kGimbalCosThreshold) {
    const double beta = (e * R(a, c) > 0.0 ? 1.0 : -1.0) * kPi / 2.0;
    const Mat3 mid = elemental(seq[1].axis, Handedness::Right, beta).matrix();
    // Eb(beta) Ec(g) Eb(beta)^T = Ea(k g); k = +-1 depends on the axis order.
    const Mat3 probe = mid * elemental(seq[2].axis, Handedness::Right, 0.5).matrix() * mid.transposed();
    const int k = (probe - elemental(seq[0].axis, Handedness::Right, 0.5).matrix()).max_abs() < 1e-9 ? 1 : -1;
    const Mat3 outer = R * mid.transposed();  // Ea(a + k g)
    const int a1 = (a + 1) % 3, a2 = (a + 2) % 3;
    const double phi = std::atan2(outer(a2, a1), outer(a1, a1));
    ExtractionResult res;
    res.primary = assemble(phi / 2.0, beta, k * phi / 2.0);
    res.gimbal_lock = true;
    const int rel = k * static_cast<int>(s0 * s2);
    res.constraint = GimbalConstraint{seq[0].role, seq[2].role, rel, s0 * phi};
    res.constraint_note = res.constraint->describe();
    return res;
  }

  const double b1 = std::asin(std::clamp(e * R(a, c), -1.0, 1.0));
  const double cb = std::cos(b1);
  const double a1 = std::atan2(-e * R(b, c) / cb, R(c, c) / cb);
  const double g1 = std::atan2(-e * R(a, b) / cb, R(a, a) / cb);
  ExtractionResult res;
  res.primary = assemble(a1, b1, g1);
  res.secondary = assemble(detail::flip_by_pi(a1), detail::second_middle(b1), detail::flip_by_pi(g1));
  return res;
}

/// 6D-RepNet's single-solution extraction, applied to a REPNET6D-system matrix
/// (R = Rz(r) Ry(y) Rx(p), all right-handed). Yaw always lands in [-pi/2, pi/2];
/// when sqrt(R00^2 + R10^2) < 1e-6 roll is forced to zero.
inline EulerAngles extract_repnet(const RotationMatrix& rot) {
  const auto& R = rot.matrix();
  const double sy = std::sqrt(R(0, 0) * R(0, 0) + R(1, 0) * R(1, 0));
  const bool singular = sy < 1e-6;
  double x, y, z;
  if (!singular) {
    x = std::atan2(R(2, 1), R(2, 2));
    y = std::atan2(-R(2, 0), sy);
    z = std::atan2(R(1, 0), R(0, 0));
  } else {
    x = std::atan2(-R(1, 2), R(1, 1));
    y = std::atan2(-R(2, 0), sy);
    z = 0.0;
  }
  return detail::tag(x, y, z, repnet6d());
}

/// Extraction under any convention. Conventions sharing a builtin's sequence
/// reuse its closed form; the rest go through extract_tait_bryan.
inline ExtractionResult extract(const RotationMatrix& rot, const ConventionPtr& conv) {
  if (!conv) throw InvalidInput("extraction needs a convention");
  if (conv->sequence == w300lp()->sequence) return detail::retag(extract_300wlp(rot), conv);
  if (conv->sequence == wiki_zyx()->sequence) return detail::retag(extract_wiki_zyx(rot), conv);
  if (conv->sequence == repnet6d()->sequence)
    return detail::retag(extract_300wlp(rot.transposed()), conv);  // R_6d(p,y,r) = R_W(p,y,r)^T
  return extract_tait_bryan(rot, conv);
}

/// First solution whose angles fit `conv`'s ranges, after wrapping yaw above pi by -2 pi.
inline std::optional<EulerAngles> select_in_ranges(const ExtractionResult& result,
                                                   const ConventionPtr& conv) {
  const auto fits = [&](EulerAngles e) -> std::optional<EulerAngles> {
    if (e.yaw > kPi) e.yaw -= 2.0 * kPi;
    if (!within_ranges(*conv, e.pitch, e.yaw, e.roll)) return std::nullopt;
    e.convention = conv;
    return e;
  };
  if (auto e = fits(result.primary)) return e;
  if (result.secondary)
    if (auto e = fits(*result.secondary)) return e;
  return std::nullopt;
}

/// WHENet's select_euler: first solution with |pitch| < 90 deg and |roll| < 90 deg,
/// or nothing (WHENet's -999 sentinel).
inline std::optional<EulerAngles> whenet_select_euler(const ExtractionResult& result) {
  return select_in_ranges(result, whenet_panoptic());
}

}  // namespace headpose
