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

// Fixed-size 3x3 algebra and the rotation group.
//
// Storage is row-major and rotations act on column vectors from the left:
// rotated = R * v^T, i.e. each column of R is the image of a basis axis.
// This holds for every module in the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "headpose/errors.hpp"

namespace headpose {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad2deg(double rad) { return rad * kDegPerRad; }

/// Orthonormality / determinant tolerance applied when a RotationMatrix is built.
inline constexpr double kRotationTolerance = 1e-9;

struct Vec3 {
  double x{}, y{}, z{};

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 real matrix, row-major.
class Mat3 {
 public:
  constexpr Mat3() = default;
  constexpr explicit Mat3(const std::array<double, 9>& row_major) : m_(row_major) {}
  constexpr Mat3(double a00, double a01, double a02,  //
                 double a10, double a11, double a12,  //
                 double a20, double a21, double a22)
      : m_{a00, a01, a02, a10, a11, a12, a20, a21, a22} {}

  static constexpr Mat3 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Mat3 zero() { return Mat3{}; }
  static constexpr Mat3 diag(double a, double b, double c) {
    return {a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, c};
  }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z};
  }

  constexpr double operator()(int r, int c) const { return m_[static_cast<std::size_t>(r * 3 + c)]; }
  constexpr double& operator()(int r, int c) { return m_[static_cast<std::size_t>(r * 3 + c)]; }

  constexpr const std::array<double, 9>& data() const { return m_; }

  constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
  constexpr Vec3 col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

  constexpr Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  constexpr double determinant() const {
    const auto& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }

  constexpr double trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : m_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (double v : m_) s = std::max(s, std::abs(v));
    return s;
  }

  bool finite() const {
    for (double v : m_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  constexpr Mat3 operator*(const Mat3& o) const {
    Mat3 p;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        p(r, c) = (*this)(r, 0) * o(0, c) + (*this)(r, 1) * o(1, c) + (*this)(r, 2) * o(2, c);
    return p;
  }

  constexpr Vec3 operator*(const Vec3& v) const { return {row(0).dot(v), row(1).dot(v), row(2).dot(v)}; }

  constexpr Mat3 operator*(double s) const {
    Mat3 p = *this;
    for (auto& v : p.m_) v *= s;
    return p;
  }

  constexpr Mat3 operator+(const Mat3& o) const {
    Mat3 p = *this;
    for (std::size_t i = 0; i < 9; ++i) p.m_[i] += o.m_[i];
    return p;
  }

  constexpr Mat3 operator-(const Mat3& o) const {
    Mat3 p = *this;
    for (std::size_t i = 0; i < 9; ++i) p.m_[i] -= o.m_[i];
    return p;
  }

  constexpr bool operator==(const Mat3&) const = default;

 private:
  std::array<double, 9> m_{};
};

inline std::ostream& operator<<(std::ostream& os, const Mat3& m) {
  os << "[";
  for (int r = 0; r < 3; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < 3; ++c) os << (c ? ", " : "") << m(r, c);
    os << "]";
  }
  return os << "]";
}

/// ||A^T A - I||_F.
inline double orthonormality_error(const Mat3& m) {
  return (m.transposed() * m - Mat3::identity()).frobenius_norm();
}

/// Element of SO(3). Construction validates orthonormality and det = +1.
class RotationMatrix {
 public:
  RotationMatrix() = default;  // identity

  /// Throws InvalidInput unless ||M^T M - I||_F <= tol and |det M - 1| <= tol.
  static RotationMatrix from(const Mat3& m, double tol = kRotationTolerance) {
    if (!m.finite()) throw InvalidInput("rotation matrix has non-finite entries");
    const double ortho = orthonormality_error(m);
    if (ortho > tol)
      throw InvalidInput("matrix is not orthonormal (||M^T M - I||_F = " + std::to_string(ortho) + ")");
    const double det = m.determinant();
    if (std::abs(det - 1.0) > tol)
      throw InvalidInput("matrix determinant is " + std::to_string(det) + ", expected +1");
    return RotationMatrix(m);
  }

  static RotationMatrix identity() { return RotationMatrix(); }

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  RotationMatrix transposed() const { return RotationMatrix(m_.transposed()); }

  Vec3 apply(const Vec3& v) const { return m_ * v; }

  bool operator==(const RotationMatrix&) const = default;

 private:
  explicit RotationMatrix(const Mat3& m) : m_(m) {}
  Mat3 m_ = Mat3::identity();
};

inline std::ostream& operator<<(std::ostream& os, const RotationMatrix& r) { return os << r.matrix(); }

enum class Axis { X = 0, Y = 1, Z = 2 };
enum class Handedness { Right, Left };

inline constexpr int index(Axis a) { return static_cast<int>(a); }

inline constexpr char axis_name(Axis a) { return "XYZ"[index(a)]; }

/// Rotation of `angle` radians about `axis`. Right-handed matrices are the
/// usual counter-clockwise ones; a left-handed elemental is the transpose.
inline RotationMatrix elemental(Axis axis, Handedness handedness, double angle) {
  if (!std::isfinite(angle)) throw InvalidInput("elemental rotation angle must be finite");
  const double c = std::cos(angle);
  const double s = handedness == Handedness::Right ? std::sin(angle) : -std::sin(angle);
  Mat3 m;
  switch (axis) {
    case Axis::X:
      m = {1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c};
      break;
    case Axis::Y:
      m = {c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c};
      break;
    case Axis::Z:
      m = {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
      break;
  }
  return RotationMatrix::from(m);
}

/// Matrix product a * b.
inline RotationMatrix compose(const RotationMatrix& a, const RotationMatrix& b) {
  return RotationMatrix::from(a.matrix() * b.matrix());
}

inline RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) { return compose(a, b); }

inline RotationMatrix inverse(const RotationMatrix& r) { return r.transposed(); }

inline double frobenius_distance(const Mat3& a, const Mat3& b) { return (a - b).frobenius_norm(); }

inline double frobenius_distance(const RotationMatrix& a, const RotationMatrix& b) {
  return frobenius_distance(a.matrix(), b.matrix());
}

/// Rotation angle of a^T b in [0, pi], i.e. arccos((trace(a^T b) - 1) / 2).
/// Evaluated as atan2(|skew part|, trace - 1), which stays accurate near 0 and pi.
inline double geodesic_distance(const RotationMatrix& a, const RotationMatrix& b) {
  const Mat3 m = a.matrix().transposed() * b.matrix();
  const double s = std::hypot(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  return std::atan2(s, m.trace() - 1.0);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Smallest signed difference a - b on the circle.
inline double angle_difference(double a, double b) { return wrap_angle(a - b); }

}  // namespace headpose
