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

// Absolute orientation (Horn's quaternion method) and the compound head pose
// built from it.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "headpose/conventions.hpp"
#include "json.hpp"

namespace headpose {

struct KeypointSet {
  std::vector<Vec3> points;
  std::vector<std::string> labels;  // empty or one per point

  std::size_t size() const { return points.size(); }
};

struct Alignment {
  RotationMatrix rotation;
  double scale = 1.0;
  Vec3 translation;
  double residual = 0.0;  // RMS of |s R m + t - o|
};

struct CameraExtrinsic {
  RotationMatrix r;
  Vec3 t;
};

/// 58-point frontal face template, in its native units.
inline const std::vector<Vec3>& reference_head_points() {
  static const std::vector<Vec3> pts{
    {-7.308957, 0.913869, 0.000000}, {-6.775290, -0.730814, -0.012799}, {-5.665918, -3.286078, 1.022951},
    {-5.011779, -4.876396, 1.047961}, {-4.056931, -5.947019, 1.636229}, {-1.833492, -7.056977, 4.061275},
    {0.000000, -7.415691, 4.070434}, {1.833492, -7.056977, 4.061275}, {4.056931, -5.947019, 1.636229},
    {5.011779, -4.876396, 1.047961}, {5.665918, -3.286078, 1.022951}, {6.775290, -0.730814, -0.012799},
    {7.308957, 0.913869, 0.000000}, {5.311432, 5.485328, 3.987654}, {4.461908, 6.189018, 5.594410},
    {3.550622, 6.185143, 5.712299}, {2.542231, 5.862829, 4.687939}, {1.789930, 5.393625, 4.413414},
    {2.693583, 5.018237, 5.072837}, {3.530191, 4.981603, 4.937805}, {4.490323, 5.186498, 4.694397},
    {-5.311432, 5.485328, 3.987654}, {-4.461908, 6.189018, 5.594410}, {-3.550622, 6.185143, 5.712299},
    {-2.542231, 5.862829, 4.687939}, {-1.789930, 5.393625, 4.413414}, {-2.693583, 5.018237, 5.072837},
    {-3.530191, 4.981603, 4.937805}, {-4.490323, 5.186498, 4.694397}, {1.330353, 7.122144, 6.903745},
    {2.533424, 7.878085, 7.451034}, {4.861131, 7.878672, 6.601275}, {6.137002, 7.271266, 5.200823},
    {6.825897, 6.760612, 4.402142}, {-1.330353, 7.122144, 6.903745}, {-2.533424, 7.878085, 7.451034},
    {-4.861131, 7.878672, 6.601275}, {-6.137002, 7.271266, 5.200823}, {-6.825897, 6.760612, 4.402142},
    {-2.774015, -2.080775, 5.048531}, {-0.509714, -1.571179, 6.566167}, {0.000000, -1.646444, 6.704956},
    {0.509714, -1.571179, 6.566167}, {2.774015, -2.080775, 5.048531}, {0.589441, -2.958597, 6.109526},
    {0.000000, -3.116408, 6.097667}, {-0.589441, -2.958597, 6.109526}, {-0.981972, 4.554081, 6.301271},
    {-0.973987, 1.916389, 7.654050}, {-2.005628, 1.409845, 6.165652}, {-1.930245, 0.424351, 5.914376},
    {-0.746313, 0.348381, 6.263227}, {0.000000, 0.000000, 6.763430}, {0.746313, 0.348381, 6.263227},
    {1.930245, 0.424351, 5.914376}, {2.005628, 1.409845, 6.165652}, {0.973987, 1.916389, 7.654050},
    {0.981972, 4.554081, 6.301271},
  };
  return pts;
}

/// The template scaled by `scale`, then rotated by the W300LP pose (degrees).
inline KeypointSet reference_head(double scale = 0.01, double pitch_deg = 10.0, double yaw_deg = 0.0,
                                  double roll_deg = 0.0) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("reference head scale must be positive");
  const auto r = euler_to_matrix(w300lp(), deg2rad(pitch_deg), deg2rad(yaw_deg), deg2rad(roll_deg));
  KeypointSet k;
  k.points.reserve(reference_head_points().size());
  for (const auto& p : reference_head_points()) k.points.push_back(r.apply(p * scale));
  return k;
}

/// Transforms every point by s R p + t.
inline KeypointSet transform_points(const KeypointSet& k, double s, const RotationMatrix& r, const Vec3& t) {
  KeypointSet out{{}, k.labels};
  out.points.reserve(k.size());
  for (const auto& p : k.points) out.points.push_back(r.apply(p) * s + t);
  return out;
}

namespace detail {

inline Vec3 centroid(const std::vector<Vec3>& pts) {
  Vec3 c;
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

/// Rank of the scatter of centred points, with a relative tolerance.
inline int scatter_rank(const std::vector<Vec3>& pts, const Vec3& c) {
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d(p.x - c.x, p.y - c.y, p.z - c.z);
    s += d * d.transpose();
  }
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(s).eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (int i = 0; i < 3; ++i)
    if (ev(i) > 1e-12 * top) ++rank;
  return rank;
}

}  // namespace detail

/// Least-squares similarity with observed ~ s R model + t.
/// Scale is sum o'.(R m') / sum |m'|^2 over centred points.
inline Alignment horn_align(const KeypointSet& model, const KeypointSet& observed) {
  const auto n = model.size();
  if (n != observed.size())
    throw InvalidInput("model has " + std::to_string(n) + " points, observed has " +
                       std::to_string(observed.size()));
  if (n < 3) throw InvalidInput("alignment needs at least 3 points");
  for (std::size_t i = 0; i < n; ++i)
    if (!model.points[i].finite() || !observed.points[i].finite())
      throw InvalidInput("keypoint " + std::to_string(i) + " is not finite");

  const Vec3 cm = detail::centroid(model.points), co = detail::centroid(observed.points);
  if (detail::scatter_rank(model.points, cm) < 2 || detail::scatter_rank(observed.points, co) < 2)
    throw DegenerateGeometry("keypoints are collinear or coincident");

  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  double model_ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = model.points[i] - cm, b = observed.points[i] - co;
    s += Eigen::Vector3d(a.x, a.y, a.z) * Eigen::Vector3d(b.x, b.y, b.z).transpose();
    model_ss += a.dot(a);
  }
  const double sxx = s(0, 0), sxy = s(0, 1), sxz = s(0, 2);
  const double syx = s(1, 0), syy = s(1, 1), syz = s(1, 2);
  const double szx = s(2, 0), szy = s(2, 1), szz = s(2, 2);
  Eigen::Matrix4d nmat;
  nmat << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,  //
      syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,      //
      szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,     //
      sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(nmat);
  if (es.info() != Eigen::Success) throw DegenerateGeometry("eigen decomposition failed");
  Eigen::Vector4d q = es.eigenvectors().col(3);
  q.normalize();
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  const Mat3 rm{w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y),
                2 * (y * x + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x),
                2 * (z * x - w * y), 2 * (z * y + w * x), w * w - x * x - y * y + z * z};

  Alignment out;
  out.rotation = RotationMatrix::from(rm, 1e-8);
  double proj = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    proj += (observed.points[i] - co).dot(out.rotation.apply(model.points[i] - cm));
  out.scale = proj / model_ss;
  if (!(out.scale > 0.0)) throw DegenerateGeometry("alignment scale is not positive");
  out.translation = co - out.rotation.apply(cm) * out.scale;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = out.rotation.apply(model.points[i]) * out.scale + out.translation - observed.points[i];
    sq += d.dot(d);
  }
  out.residual = std::sqrt(sq / static_cast<double>(n));
  return out;
}

/// diag(1, -1, -1): OpenPose's standard-pose frame, turned 180 degrees about X.
inline RotationMatrix e_ref() { return RotationMatrix::from(Mat3::diag(1.0, -1.0, -1.0)); }

/// E_ref (C R_horn) E_ref^-1, the published WHENet formula.
inline RotationMatrix whenet_compound_pose(const RotationMatrix& horn_r, const CameraExtrinsic& cam) {
  const Mat3 e = e_ref().matrix();
  return RotationMatrix::from(e * cam.r.matrix() * horn_r.matrix() * e.transposed());
}

/// E_ref C R_horn, a rotation in 300W-LP's system.
inline RotationMatrix panoptic_pose(const RotationMatrix& horn_r, const CameraExtrinsic& cam) {
  return RotationMatrix::from(e_ref().matrix() * cam.r.matrix() * horn_r.matrix());
}

/// Keeps the point pairs whose confidence exceeds `threshold`; throws
/// DegenerateGeometry when fewer than `min_points` remain.
inline std::pair<KeypointSet, KeypointSet> filter_by_confidence(const KeypointSet& model,
                                                                const KeypointSet& observed,
                                                                const std::vector<double>& confidence,
                                                                double threshold = 0.1,
                                                                std::size_t min_points = 6) {
  if (model.size() != observed.size() || confidence.size() != model.size())
    throw InvalidInput("model, observed and confidence lists differ in length");
  KeypointSet m, o;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!(confidence[i] > threshold)) continue;
    m.points.push_back(model.points[i]);
    o.points.push_back(observed.points[i]);
    if (!model.labels.empty()) m.labels.push_back(model.labels[i]);
    if (!observed.labels.empty()) o.labels.push_back(observed.labels[i]);
  }
  if (m.size() < min_points)
    throw DegenerateGeometry(std::to_string(m.size()) + " keypoints pass the confidence threshold, need " +
                             std::to_string(min_points));
  return {m, o};
}

// ---------------------------------------------------------------------------
// JSON

/// [[x, y, z], ...] or {"points": [...], "labels"?: [...], "confidence"?: [...]}.
inline KeypointSet keypoints_from_json(const nlohmann::json& j) {
  try {
    const nlohmann::json& arr = j.is_object() ? j.at("points") : j;
    if (!arr.is_array()) throw FormatError("keypoints must be an array of [x, y, z]");
    KeypointSet k;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& p = arr[i];
      if (!p.is_array() || p.size() != 3) throw FormatError("keypoint must be [x, y, z]", i);
      k.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    if (j.is_object() && j.contains("labels")) {
      k.labels = j.at("labels").get<std::vector<std::string>>();
      if (k.labels.size() != k.points.size()) throw FormatError("labels and points differ in length");
    }
    return k;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad keypoint JSON: ") + e.what());
  }
}

inline std::optional<std::vector<double>> confidence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("confidence")) return std::nullopt;
  try {
    return j.at("confidence").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad confidence list: ") + e.what());
  }
}

inline nlohmann::json to_json(const KeypointSet& k) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : k.points) arr.push_back({p.x, p.y, p.z});
  nlohmann::json j{{"points", arr}};
  if (!k.labels.empty()) j["labels"] = k.labels;
  return j;
}

/// {"R": [9 row-major], "t": [3]}.
inline CameraExtrinsic camera_from_json(const nlohmann::json& j) {
  try {
    const auto& r = j.at("R");
    std::array<double, 9> m{};
    if (r.is_array() && r.size() == 3 && r[0].is_array()) {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) m[i * 3 + k] = r[i].at(k).get<double>();
    } else if (r.is_array() && r.size() == 9) {
      for (std::size_t i = 0; i < 9; ++i) m[i] = r[i].get<double>();
    } else {
      throw FormatError("camera R must have 9 numbers");
    }
    CameraExtrinsic cam;
    cam.r = RotationMatrix::from(Mat3(m), 1e-6);
    if (j.contains("t")) {
      const auto t = j.at("t").get<std::vector<double>>();
      if (t.size() != 3) throw FormatError("camera t must have 3 numbers");
      cam.t = {t[0], t[1], t[2]};
    }
    return cam;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad camera JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const Alignment& a) {
  return {{"rotation", a.rotation.matrix().data()},
          {"scale", a.scale},
          {"translation", {a.translation.x, a.translation.y, a.translation.z}},
          {"residual", a.residual}};
}

}  // namespace headpose
