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

// Moving rotations between rotation systems.
//
// A rotation written in system A is rewritten in system B by a similarity with
// a signed permutation t (R_B = t R_A t^T). Some pairs share a frame and need
// no change; REPNET6D and W300LP are inverse systems, related by a transpose.

#include <string>
#include <vector>

#include "headpose/conventions.hpp"
#include "headpose/euler_extract.hpp"

namespace headpose {

struct BasisChange {
  Mat3 t = Mat3::identity();
  std::string from_convention;
  std::string to_convention;
  bool transpose_relation = false;

  BasisChange inverse() const {
    return {t.transposed(), to_convention, from_convention, transpose_relation};
  }
};

/// True iff `t` is orthogonal, has entries in {-1, 0, 1} and determinant +-1.
inline bool is_signed_permutation(const Mat3& t) {
  for (double v : t.data())
    if (v != 0.0 && v != 1.0 && v != -1.0) return false;
  return (t * t.transposed() - Mat3::identity()).max_abs() == 0.0 &&
         std::abs(std::abs(t.determinant()) - 1.0) == 0.0;
}

/// 300W-LP frame to SciPy frame: (a, b, c) -> (c, a, b).
inline BasisChange basis_w2s() {
  return {Mat3{0, 0, 1, 1, 0, 0, 0, 1, 0}, "W300LP", "WIKI_ZYX", false};
}

inline BasisChange basis_s2w() { return basis_w2s().inverse(); }

inline RotationMatrix convert_rotation(const RotationMatrix& r, const BasisChange& change) {
  if (change.transpose_relation) return r.transposed();
  return RotationMatrix::from(change.t * r.matrix() * change.t.transposed());
}

/// Registered (from, to) pairs. Lookups of an unregistered pair throw Unsupported;
/// a convention converts to itself by the identity.
class BasisRegistry {
 public:
  static const BasisRegistry& builtin() {
    static const BasisRegistry reg = [] {
      BasisRegistry r;
      r.add(basis_w2s());
      r.add({Mat3::identity(), "REPNET6D", "W300LP", true});
      r.add({Mat3::identity(), "WHENET_PANOPTIC", "W300LP", false});
      r.add({Mat3::identity(), "TDDFA_V2", "W300LP", false});
      return r;
    }();
    return reg;
  }

  /// Adds `change` and its inverse.
  void add(const BasisChange& change) {
    if (!is_signed_permutation(change.t))
      throw InvalidInput("basis change " + change.from_convention + "->" + change.to_convention +
                         " is not a signed permutation");
    pairs_.push_back(change);
    pairs_.push_back(change.inverse());
  }

  BasisChange find(const std::string& from, const std::string& to) const {
    if (from == to) return {Mat3::identity(), from, to, false};
    for (const auto& p : pairs_)
      if (p.from_convention == from && p.to_convention == to) return p;
    throw Unsupported("no registered conversion from " + from + " to " + to);
  }

  bool contains(const std::string& from, const std::string& to) const {
    try {
      find(from, to);
      return true;
    } catch (const Unsupported&) {
      return false;
    }
  }

  const std::vector<BasisChange>& pairs() const { return pairs_; }

 private:
  std::vector<BasisChange> pairs_;
};

namespace detail {
inline const RotationConvention& checked(const ConventionPtr& c) {
  if (!c) throw InvalidInput("null convention");
  return *c;
}
}  // namespace detail

/// Rebuild, move to the target system, extract there.
inline ExtractionResult convert_euler(const EulerAngles& angles, const ConventionPtr& to,
                                      const BasisRegistry& reg = BasisRegistry::builtin()) {
  const auto& src = detail::checked(angles.convention);
  const auto change = reg.find(src.name, detail::checked(to).name);
  return extract(convert_rotation(euler_to_matrix(angles), change), to);
}

/// Frobenius distance between `original` (in system `from`) and the matrix
/// obtained by converting, extracting under `to`, rebuilding and converting back.
inline double roundtrip_error(const RotationMatrix& original, const ConventionPtr& from,
                              const ConventionPtr& to, const BasisRegistry& reg = BasisRegistry::builtin()) {
  const auto change = reg.find(detail::checked(from).name, detail::checked(to).name);
  const auto res = extract(convert_rotation(original, change), to);
  const auto& e = res.primary;
  const RotationMatrix rebuilt = sequence_product(to->sequence, e.pitch, e.yaw, e.roll);
  return frobenius_distance(original, convert_rotation(rebuilt, change.inverse()));
}

inline double roundtrip_error(const EulerAngles& angles, const ConventionPtr& to,
                              const BasisRegistry& reg = BasisRegistry::builtin()) {
  return roundtrip_error(euler_to_matrix(angles), angles.convention, to, reg);
}

}  // namespace headpose
