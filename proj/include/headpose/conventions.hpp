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

// Declarative Euler / Tait-Bryan rotation systems.
//
// A convention is an ordered list of three elemental rotations. The list is
// the multiplication order: R = E0(a0) * E1(a1) * E2(a2). An intrinsic reading
// applies E0 first; the equivalent extrinsic reading is the same product read
// right to left, so no separate flag is stored.

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "headpose/errors.hpp"
#include "headpose/so3.hpp"
#include "json.hpp"

namespace headpose {

enum class AngleRole { Pitch = 0, Yaw = 1, Roll = 2 };

inline constexpr std::string_view role_name(AngleRole r) {
  switch (r) {
    case AngleRole::Pitch:
      return "pitch";
    case AngleRole::Yaw:
      return "yaw";
    case AngleRole::Roll:
      return "roll";
  }
  return "?";
}

inline AngleRole parse_role(std::string_view s) {
  if (s == "pitch" || s == "p") return AngleRole::Pitch;
  if (s == "yaw" || s == "y") return AngleRole::Yaw;
  if (s == "roll" || s == "r") return AngleRole::Roll;
  throw InvalidInput("unknown angle role '" + std::string(s) + "'");
}

/// One factor of a convention: rotation about `axis` by the angle playing `role`.
struct ElementalSpec {
  Axis axis = Axis::X;
  Handedness handedness = Handedness::Right;
  AngleRole role = AngleRole::Pitch;

  bool operator==(const ElementalSpec&) const = default;

  /// "Z+yaw" for a right-handed yaw about Z, "X-pitch" for a left-handed pitch about X.
  std::string to_string() const {
    std::string s(1, axis_name(axis));
    s += handedness == Handedness::Right ? '+' : '-';
    s += role_name(role);
    return s;
  }

  static ElementalSpec parse(std::string_view s) {
    if (s.size() < 3) throw InvalidInput("bad elemental spec '" + std::string(s) + "'");
    ElementalSpec e;
    switch (s[0]) {
      case 'X':
        e.axis = Axis::X;
        break;
      case 'Y':
        e.axis = Axis::Y;
        break;
      case 'Z':
        e.axis = Axis::Z;
        break;
      default:
        throw InvalidInput("bad axis in elemental spec '" + std::string(s) + "'");
    }
    if (s[1] == '+')
      e.handedness = Handedness::Right;
    else if (s[1] == '-')
      e.handedness = Handedness::Left;
    else
      throw InvalidInput("bad handedness in elemental spec '" + std::string(s) + "'");
    e.role = parse_role(s.substr(2));
    return e;
  }
};

using Sequence = std::array<ElementalSpec, 3>;

inline std::string to_string(const Sequence& seq) {
  return seq[0].to_string() + " " + seq[1].to_string() + " " + seq[2].to_string();
}

/// Interval of admissible angles (radians), each end open or closed.
struct AngleInterval {
  double lo = -kPi;
  double hi = kPi;
  bool lo_closed = false;
  bool hi_closed = true;

  static constexpr double kSlack = 1e-12;

  static AngleInterval principal() { return {}; }
  static AngleInterval open(double lo, double hi) { return {lo, hi, false, false}; }

  bool contains(double a) const {
    if (!std::isfinite(a)) return false;
    const bool above = lo_closed ? a >= lo - kSlack : a > lo;
    const bool below = hi_closed ? a <= hi + kSlack : a < hi;
    return above && below;
  }

  std::string describe_deg() const {
    return std::string(lo_closed ? "[" : "(") + std::to_string(rad2deg(lo)) + ", " +
           std::to_string(rad2deg(hi)) + (hi_closed ? "]" : ")");
  }

  bool operator==(const AngleInterval&) const = default;
};

struct RotationConvention {
  std::string name;
  Sequence sequence;
  std::string frame_note;
  std::array<AngleInterval, 3> ranges{};  // indexed by AngleRole

  const AngleInterval& range(AngleRole r) const { return ranges[static_cast<std::size_t>(r)]; }

  /// Position of `role` in the sequence.
  int position_of(AngleRole role) const {
    for (int i = 0; i < 3; ++i)
      if (sequence[static_cast<std::size_t>(i)].role == role) return i;
    throw InvalidInput("convention " + name + " has no " + std::string(role_name(role)) + " factor");
  }

  /// Throws InvalidInput unless the three factors use distinct axes and distinct roles.
  void validate() const {
    if (name.empty()) throw InvalidInput("convention name must not be empty");
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        if (sequence[i].axis == sequence[j].axis)
          throw InvalidInput("convention " + name + " repeats an axis");
        if (sequence[i].role == sequence[j].role)
          throw InvalidInput("convention " + name + " repeats an angle role");
      }
  }
};

using ConventionPtr = std::shared_ptr<const RotationConvention>;

/// Pitch/yaw/roll in radians, tagged with the convention that gives them meaning.
struct EulerAngles {
  double pitch = 0.0;
  double yaw = 0.0;
  double roll = 0.0;
  ConventionPtr convention;

  double angle(AngleRole r) const {
    switch (r) {
      case AngleRole::Pitch:
        return pitch;
      case AngleRole::Yaw:
        return yaw;
      case AngleRole::Roll:
        return roll;
    }
    return 0.0;
  }
  double& angle(AngleRole r) {
    switch (r) {
      case AngleRole::Pitch:
        return pitch;
      case AngleRole::Yaw:
        return yaw;
      default:
        return roll;
    }
  }
};

/// Throws RangeError unless each angle lies in (-pi, pi] and in the convention's range.
inline void check_ranges(const RotationConvention& conv, double pitch, double yaw, double roll) {
  const std::array<double, 3> a{pitch, yaw, roll};
  for (int i = 0; i < 3; ++i) {
    const auto role = static_cast<AngleRole>(i);
    if (!AngleInterval::principal().contains(a[i]) || !conv.range(role).contains(a[i]))
      throw RangeError(std::string(role_name(role)) + " = " + std::to_string(rad2deg(a[i])) +
                       " deg is outside " + conv.name + "'s range " +
                       conv.range(role).describe_deg());
  }
}

inline bool within_ranges(const RotationConvention& conv, double pitch, double yaw, double roll) {
  try {
    check_ranges(conv, pitch, yaw, roll);
    return true;
  } catch (const RangeError&) {
    return false;
  }
}

inline EulerAngles make_euler(ConventionPtr conv, double pitch, double yaw, double roll) {
  if (!conv) throw InvalidInput("Euler angles need a convention");
  check_ranges(*conv, pitch, yaw, roll);
  return {pitch, yaw, roll, std::move(conv)};
}

/// Product of the sequence's elementals without any range check.
inline RotationMatrix sequence_product(const Sequence& seq, double pitch, double yaw, double roll) {
  const std::array<double, 3> by_role{pitch, yaw, roll};
  Mat3 m = Mat3::identity();
  for (const auto& e : seq)
    m = m * elemental(e.axis, e.handedness, by_role[static_cast<std::size_t>(e.role)]).matrix();
  return RotationMatrix::from(m);
}

inline RotationMatrix euler_to_matrix(const RotationConvention& conv, double pitch, double yaw,
                                      double roll) {
  check_ranges(conv, pitch, yaw, roll);
  return sequence_product(conv.sequence, pitch, yaw, roll);
}

inline RotationMatrix euler_to_matrix(const ConventionPtr& conv, double pitch, double yaw,
                                      double roll) {
  if (!conv) throw InvalidInput("null convention");
  return euler_to_matrix(*conv, pitch, yaw, roll);
}

inline RotationMatrix euler_to_matrix(const EulerAngles& e) {
  if (!e.convention) throw InvalidInput("Euler angles carry no convention");
  return euler_to_matrix(*e.convention, e.pitch, e.yaw, e.roll);
}

// ---------------------------------------------------------------------------
// Builtin conventions

namespace detail {

inline constexpr ElementalSpec spec(Axis a, Handedness h, AngleRole r) { return {a, h, r}; }

inline ConventionPtr make_builtin(std::string name, Sequence seq, std::string note,
                                  std::array<AngleInterval, 3> ranges = {}) {
  auto c = std::make_shared<RotationConvention>();
  c->name = std::move(name);
  c->sequence = seq;
  c->frame_note = std::move(note);
  c->ranges = ranges;
  c->validate();
  return c;
}

}  // namespace detail

/// Right-handed intrinsic Z(yaw) Y(pitch) X(roll); the SciPy / Wikipedia system.
inline const ConventionPtr& wiki_zyx() {
  using enum Axis;
  static const ConventionPtr c = detail::make_builtin(
      "WIKI_ZYX",
      {detail::spec(Z, Handedness::Right, AngleRole::Yaw),
       detail::spec(Y, Handedness::Right, AngleRole::Pitch),
       detail::spec(X, Handedness::Right, AngleRole::Roll)},
      "right-handed frame, X out of the face (nose), Y toward the face's left, Z up; "
      "intrinsic ZYX");
  return c;
}

/// Left-handed intrinsic X(pitch) Y(yaw) Z(roll); 300W-LP's label system.
inline const ConventionPtr& w300lp() {
  using enum Axis;
  static const ConventionPtr c = detail::make_builtin(
      "W300LP",
      {detail::spec(X, Handedness::Left, AngleRole::Pitch),
       detail::spec(Y, Handedness::Left, AngleRole::Yaw),
       detail::spec(Z, Handedness::Left, AngleRole::Roll)},
      "300W-LP frame: X toward the face's left (image right), Y up, Z out of the face; "
      "left-handed elementals, intrinsic XYZ (pitch-yaw-roll)");
  return c;
}

/// Mixed-handed Z(roll) Y(yaw) X(pitch) recovered from 3DDFA_v2's matrix2angle.
inline const ConventionPtr& tddfa_v2() {
  using enum Axis;
  static const ConventionPtr c = detail::make_builtin(
      "TDDFA_V2",
      {detail::spec(Z, Handedness::Right, AngleRole::Roll),
       detail::spec(Y, Handedness::Left, AngleRole::Yaw),
       detail::spec(X, Handedness::Right, AngleRole::Pitch)},
      "300W-LP frame; right-handed roll about Z, left-handed yaw about Y, right-handed "
      "pitch about X");
  return c;
}

/// Right-handed Z(roll) Y(yaw) X(pitch) used by 6D-RepNet's get_R; the transpose of W300LP.
inline const ConventionPtr& repnet6d() {
  using enum Axis;
  static const ConventionPtr c = detail::make_builtin(
      "REPNET6D",
      {detail::spec(Z, Handedness::Right, AngleRole::Roll),
       detail::spec(Y, Handedness::Right, AngleRole::Yaw),
       detail::spec(X, Handedness::Right, AngleRole::Pitch)},
      "300W-LP frame; all right-handed, matrices are the inverse of W300LP's for the same "
      "triple");
  return c;
}

/// WHENet's CMU Panoptic labels: W300LP's matrix structure, pitch and roll in (-90, 90).
inline const ConventionPtr& whenet_panoptic() {
  using enum Axis;
  static const ConventionPtr c = detail::make_builtin(
      "WHENET_PANOPTIC",
      {detail::spec(X, Handedness::Left, AngleRole::Pitch),
       detail::spec(Y, Handedness::Left, AngleRole::Yaw),
       detail::spec(Z, Handedness::Left, AngleRole::Roll)},
      "300W-LP frame and sequence; yaw may leave [-90, 90] while pitch and roll stay "
      "strictly inside (-90, 90)",
      {AngleInterval::open(-kPi / 2, kPi / 2), AngleInterval::principal(),
       AngleInterval::open(-kPi / 2, kPi / 2)});
  return c;
}

inline std::vector<ConventionPtr> builtin_conventions() {
  return {wiki_zyx(), w300lp(), tddfa_v2(), repnet6d(), whenet_panoptic()};
}

// ---------------------------------------------------------------------------
// Registry and its JSON form

class ConventionRegistry {
 public:
  ConventionRegistry() = default;
  explicit ConventionRegistry(std::vector<ConventionPtr> items) {
    for (auto& c : items) add(std::move(c));
  }

  static ConventionRegistry builtin() { return ConventionRegistry(builtin_conventions()); }

  void add(ConventionPtr c) {
    if (!c) throw InvalidInput("null convention");
    c->validate();
    if (contains(c->name)) throw InvalidInput("duplicate convention name " + c->name);
    items_.push_back(std::move(c));
  }

  bool contains(std::string_view name) const {
    return std::any_of(items_.begin(), items_.end(), [&](const auto& c) { return c->name == name; });
  }

  /// Throws Unsupported for unknown names.
  ConventionPtr find(std::string_view name) const {
    for (const auto& c : items_)
      if (c->name == name) return c;
    throw Unsupported("unknown rotation convention '" + std::string(name) + "'");
  }

  const std::vector<ConventionPtr>& all() const { return items_; }

 private:
  std::vector<ConventionPtr> items_;
};

inline nlohmann::json interval_to_json(const AngleInterval& iv) {
  return {{"lo", rad2deg(iv.lo)}, {"hi", rad2deg(iv.hi)}, {"lo_closed", iv.lo_closed},
          {"hi_closed", iv.hi_closed}};
}

inline AngleInterval interval_from_json(const nlohmann::json& j) {
  AngleInterval iv;
  iv.lo = deg2rad(j.at("lo").get<double>());
  iv.hi = deg2rad(j.at("hi").get<double>());
  iv.lo_closed = j.value("lo_closed", false);
  iv.hi_closed = j.value("hi_closed", true);
  if (!(iv.lo < iv.hi)) throw InvalidInput("angle range has lo >= hi");
  return iv;
}

inline nlohmann::json to_json(const RotationConvention& c) {
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& e : c.sequence) seq.push_back(e.to_string());
  nlohmann::json ranges;
  for (int i = 0; i < 3; ++i) {
    const auto role = static_cast<AngleRole>(i);
    ranges[std::string(role_name(role))] = interval_to_json(c.range(role));
  }
  return {{"name", c.name}, {"sequence", seq}, {"frame_note", c.frame_note}, {"angle_ranges_deg", ranges}};
}

inline ConventionPtr convention_from_json(const nlohmann::json& j) {
  try {
    auto c = std::make_shared<RotationConvention>();
    c->name = j.at("name").get<std::string>();
    const auto& seq = j.at("sequence");
    if (!seq.is_array() || seq.size() != 3)
      throw InvalidInput("convention " + c->name + ": sequence must have exactly 3 entries");
    for (std::size_t i = 0; i < 3; ++i) c->sequence[i] = ElementalSpec::parse(seq[i].get<std::string>());
    c->frame_note = j.value("frame_note", "");
    if (j.contains("angle_ranges_deg")) {
      const auto& r = j.at("angle_ranges_deg");
      for (int i = 0; i < 3; ++i) {
        const std::string key(role_name(static_cast<AngleRole>(i)));
        if (r.contains(key)) c->ranges[static_cast<std::size_t>(i)] = interval_from_json(r.at(key));
      }
    }
    c->validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad convention JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const ConventionRegistry& reg) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : reg.all()) arr.push_back(to_json(*c));
  return {{"conventions", arr}};
}

inline ConventionRegistry registry_from_json(const nlohmann::json& j) {
  ConventionRegistry reg;
  try {
    for (const auto& item : j.at("conventions")) reg.add(convention_from_json(item));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad registry JSON: ") + e.what());
  }
  return reg;
}

// ---------------------------------------------------------------------------
// Closed-form expansions, used to certify the generic product.

/// Expanded R_S(y, p, r) = Rz(y) Ry(p) Rx(r), right-handed.
inline Mat3 wiki_zyx_closed_form(double pitch, double yaw, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  return {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,  //
          sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,  //
          -sp, cp * sr, cp * cr};
}

/// Expanded R_W(y, p, r) = Rx_left(p) Ry_left(y) Rz_left(r).
inline Mat3 w300lp_closed_form(double pitch, double yaw, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  return {cy * cr, cy * sr, -sy,                                    //
          -cp * sr + sp * sy * cr, cp * cr + sp * sy * sr, sp * cy,  //
          sp * sr + cp * sy * cr, -sp * cr + cp * sy * sr, cp * cy};
}

/// True iff euler_to_matrix matches the expanded closed form (entrywise <= 1e-12)
/// at `samples` random triples. Only WIKI_ZYX and W300LP have an expansion.
inline bool matrix_entry_formula_check(const RotationConvention& conv, int samples = 1000,
                                       std::uint64_t seed = 0) {
  Mat3 (*closed)(double, double, double) = nullptr;
  if (conv.name == "WIKI_ZYX")
    closed = &wiki_zyx_closed_form;
  else if (conv.name == "W300LP")
    closed = &w300lp_closed_form;
  else
    throw Unsupported("no closed-form expansion registered for " + conv.name);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi + 1e-9, kPi);
  for (int i = 0; i < samples; ++i) {
    const double p = angle(rng), y = angle(rng), r = angle(rng);
    const Mat3 numeric = sequence_product(conv.sequence, p, y, r).matrix();
    if ((numeric - closed(p, y, r)).max_abs() > 1e-12) return false;
  }
  return true;
}

}  // namespace headpose
