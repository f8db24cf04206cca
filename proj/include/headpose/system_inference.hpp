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

// Which elemental factorization produces a given matrix?
//
// Every ordered product of three elementals with distinct axes and distinct
// angle roles is enumerated (6 axis orders x 6 role orders x 8 handedness
// choices = 288) and evaluated numerically at generic angles.

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "headpose/conventions.hpp"
#include "json.hpp"

namespace headpose {

using FactorizationCandidate = Sequence;

/// "Z-right-roll, Y-left-yaw, X-right-pitch".
inline std::string describe_candidate(const FactorizationCandidate& c) {
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) s += ", ";
    s += axis_name(c[i].axis);
    s += c[i].handedness == Handedness::Right ? "-right-" : "-left-";
    s += role_name(c[i].role);
  }
  return s;
}

/// All 288 candidates, ordered by (axis order, role order, handedness bits),
/// each permutation in lexicographic order and the first factor's handedness
/// as the most significant bit (Right before Left).
inline std::vector<FactorizationCandidate> enumerate_candidates() {
  std::array<int, 3> axes{0, 1, 2};
  std::vector<FactorizationCandidate> out;
  out.reserve(288);
  do {
    std::array<int, 3> roles{0, 1, 2};
    do {
      for (int h = 0; h < 8; ++h) {
        FactorizationCandidate c;
        for (std::size_t i = 0; i < 3; ++i) {
          c[i].axis = static_cast<Axis>(axes[i]);
          c[i].role = static_cast<AngleRole>(roles[i]);
          c[i].handedness = ((h >> (2 - i)) & 1) ? Handedness::Left : Handedness::Right;
        }
        out.push_back(c);
      }
    } while (std::next_permutation(roles.begin(), roles.end()));
  } while (std::next_permutation(axes.begin(), axes.end()));
  return out;
}

/// Names of the builtin conventions whose sequence is `c`.
inline std::vector<std::string> builtin_names_for(const FactorizationCandidate& c) {
  std::vector<std::string> names;
  for (const auto& conv : builtin_conventions())
    if (conv->sequence == c) names.push_back(conv->name);
  return names;
}

// ---------------------------------------------------------------------------
// Patterns

/// One cell: either unconstrained, or sign * product of cos/sin of single roles
/// (sign 0 for a structural zero, an empty product for +-1).
struct CellConstraint {
  enum class Fn { Cos, Sin };
  struct Factor {
    Fn fn;
    AngleRole role;
  };

  bool free = true;
  int sign = 1;
  std::vector<Factor> factors;

  static CellConstraint any() { return {}; }
  static CellConstraint constant(int v) { return {false, v, {}}; }

  double eval(double pitch, double yaw, double roll) const {
    const std::array<double, 3> a{pitch, yaw, roll};
    double v = sign;
    for (const auto& f : factors) {
      const double x = a[static_cast<std::size_t>(f.role)];
      v *= f.fn == Fn::Cos ? std::cos(x) : std::sin(x);
    }
    return v;
  }

  /// Grammar: "free" | "-" | [+-] term ("*" term)*, term = "0" | "1" | (cos|sin) "(" role ")",
  /// role one of p, y, r, pitch, yaw, roll.
  static CellConstraint parse(std::string_view text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "free" || s == "-" || s == "*" || s == "?" || s == "\u2013") return any();
    if (s.empty()) throw InvalidInput("empty pattern cell");
    CellConstraint c{false, 1, {}};
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      if (s[0] == '-') c.sign = -1;
      i = 1;
    } else if (s.rfind("\u00b1", 0) == 0) {
      throw InvalidInput("pattern cell '" + s + "': choose a sign instead of +-");
    }
    const auto fail = [&] { return InvalidInput("cannot parse pattern cell '" + std::string(text) + "'"); };
    while (true) {
      if (i >= s.size()) throw fail();
      if (s[i] == '0' || s[i] == '1') {
        if (s[i] == '0') c.sign = 0;
        ++i;
      } else {
        Fn fn;
        if (s.compare(i, 4, "cos(") == 0)
          fn = Fn::Cos;
        else if (s.compare(i, 4, "sin(") == 0)
          fn = Fn::Sin;
        else
          throw fail();
        i += 4;
        const auto close = s.find(')', i);
        if (close == std::string::npos) throw fail();
        c.factors.push_back({fn, parse_role(std::string_view(s).substr(i, close - i))});
        i = close + 1;
      }
      if (i == s.size()) break;
      if (s[i] != '*') throw fail();
      ++i;
    }
    if (c.sign == 0) c.factors.clear();
    return c;
  }

  std::string to_string() const {
    if (free) return "free";
    if (sign == 0) return "0";
    std::string s = sign < 0 ? "-" : "";
    if (factors.empty()) return s + "1";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += "*";
      s += factors[i].fn == Fn::Cos ? "cos(" : "sin(";
      s += role_name(factors[i].role).substr(0, 1);
      s += ")";
    }
    return s;
  }
};

struct EntryPattern {
  std::array<CellConstraint, 9> cells{};  // row-major

  const CellConstraint& operator()(int r, int c) const { return cells[static_cast<std::size_t>(r * 3 + c)]; }
  CellConstraint& operator()(int r, int c) { return cells[static_cast<std::size_t>(r * 3 + c)]; }

  std::size_t constrained_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.free; }));
  }

  static EntryPattern all_free() { return {}; }
};

/// Pattern from JSON: a 3x3 array of cell strings, either bare or under "pattern".
inline EntryPattern pattern_from_json(const nlohmann::json& j) {
  const nlohmann::json& g = j.is_object() ? j.at("pattern") : j;
  if (!g.is_array() || g.size() != 3) throw FormatError("pattern must be a 3x3 array of strings");
  EntryPattern p;
  for (int r = 0; r < 3; ++r) {
    const auto& row = g[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3) throw FormatError("pattern row " + std::to_string(r) + " must have 3 cells");
    for (int c = 0; c < 3; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (cell.is_number()) {
        const double v = cell.get<double>();
        if (v != 0.0 && v != 1.0 && v != -1.0) throw FormatError("numeric pattern cells must be 0, 1 or -1");
        p(r, c) = CellConstraint::constant(static_cast<int>(v));
      } else if (cell.is_string()) {
        try {
          p(r, c) = CellConstraint::parse(cell.get<std::string>());
        } catch (const InvalidInput& e) {
          throw FormatError(e.what());
        }
      } else {
        throw FormatError("pattern cells must be strings or numbers");
      }
    }
  }
  return p;
}

inline nlohmann::json to_json(const EntryPattern& p) {
  nlohmann::json g = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) row.push_back(p(r, c).to_string());
    g.push_back(row);
  }
  return {{"pattern", g}};
}

/// The 3DDFA_v2 matrix2angle pattern: first column cos(r)cos(y), sin(r)cos(y), sin(y);
/// last row cos(y)sin(p), cos(y)cos(p); the rest free.
inline EntryPattern tddfa_pattern() {
  EntryPattern p;
  p(0, 0) = CellConstraint::parse("cos(r)*cos(y)");
  p(1, 0) = CellConstraint::parse("sin(r)*cos(y)");
  p(2, 0) = CellConstraint::parse("sin(y)");
  p(2, 1) = CellConstraint::parse("cos(y)*sin(p)");
  p(2, 2) = CellConstraint::parse("cos(y)*cos(p)");
  return p;
}

/// Generic angle triples: uniform in (-pi, pi), each at least `margin` from any
/// multiple of pi/2.
inline std::vector<std::array<double, 3>> generic_angle_samples(int count, std::uint64_t seed,
                                                                double margin = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const auto generic = [&](double a) {
    const double q = kPi / 2.0;
    return std::abs(a - q * std::round(a / q)) >= margin;
  };
  std::vector<std::array<double, 3>> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    std::array<double, 3> t{};
    for (auto& a : t) {
      do a = u(rng);
      while (!generic(a));
    }
    out.push_back(t);
  }
  return out;
}

inline bool candidate_matches(const FactorizationCandidate& c, const EntryPattern& pattern,
                              const std::vector<std::array<double, 3>>& samples, double tol = 1e-9) {
  for (const auto& s : samples) {
    const Mat3 m = sequence_product(c, s[0], s[1], s[2]).matrix();
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) {
        const auto& cell = pattern(r, col);
        if (!cell.free && std::abs(m(r, col) - cell.eval(s[0], s[1], s[2])) > tol) return false;
      }
  }
  return true;
}

/// Candidates whose product matches every constrained cell (<= 1e-9) at
/// `samples` generic triples drawn from `seed`. Enumeration order is kept.
inline std::vector<FactorizationCandidate> match_pattern(const EntryPattern& pattern, int samples = 32,
                                                         std::uint64_t seed = 0) {
  if (samples < 16) throw InvalidInput("pattern matching needs at least 16 samples");
  const auto pts = generic_angle_samples(samples, seed);
  std::vector<FactorizationCandidate> out;
  for (const auto& c : enumerate_candidates())
    if (candidate_matches(c, pattern, pts)) out.push_back(c);
  return out;
}

/// One observation: (pitch, yaw, roll) in radians and the matrix they produced.
struct NumericSample {
  std::array<double, 3> angles{};
  RotationMatrix rotation;
};

/// Candidates reproducing every sample matrix to 1e-6 (max entry). With a
/// role-order hint only candidates applying the roles in that order are kept.
/// An empty result means no elemental factorization fits.
inline std::vector<FactorizationCandidate> infer_from_numeric_samples(
    const std::vector<NumericSample>& samples, std::optional<std::array<AngleRole, 3>> role_order = std::nullopt) {
  if (samples.empty()) throw InvalidInput("no samples given");
  std::vector<FactorizationCandidate> out;
  for (const auto& c : enumerate_candidates()) {
    if (role_order && (c[0].role != (*role_order)[0] || c[1].role != (*role_order)[1] || c[2].role != (*role_order)[2]))
      continue;
    const bool ok = std::all_of(samples.begin(), samples.end(), [&](const NumericSample& s) {
      const Mat3 m = sequence_product(c, s.angles[0], s.angles[1], s.angles[2]).matrix();
      return (m - s.rotation.matrix()).max_abs() <= 1e-6;
    });
    if (ok) out.push_back(c);
  }
  return out;
}

/// {"samples": [{"euler_deg": {"pitch", "yaw", "roll"}, "rotation": [9]}], "role_order"?: [3 roles]}
inline std::pair<std::vector<NumericSample>, std::optional<std::array<AngleRole, 3>>> samples_from_json(
    const nlohmann::json& j) {
  try {
    std::vector<NumericSample> out;
    for (const auto& item : j.at("samples")) {
      NumericSample s;
      const auto& e = item.at("euler_deg");
      s.angles = {deg2rad(e.at("pitch").get<double>()), deg2rad(e.at("yaw").get<double>()),
                  deg2rad(e.at("roll").get<double>())};
      const auto& r = item.at("rotation");
      if (!r.is_array() || r.size() != 9) throw FormatError("sample rotation must have 9 numbers", out.size());
      std::array<double, 9> m{};
      for (std::size_t i = 0; i < 9; ++i) m[i] = r[i].get<double>();
      try {
        s.rotation = RotationMatrix::from(Mat3(m), 1e-6);
      } catch (const InvalidInput& err) {
        throw ValidationError(err.what(), out.size());
      }
      out.push_back(s);
    }
    std::optional<std::array<AngleRole, 3>> hint;
    if (j.contains("role_order")) {
      const auto& h = j.at("role_order");
      if (!h.is_array() || h.size() != 3) throw FormatError("role_order must list 3 roles");
      hint = std::array<AngleRole, 3>{parse_role(h[0].get<std::string>()), parse_role(h[1].get<std::string>()),
                                      parse_role(h[2].get<std::string>())};
    }
    return {out, hint};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad samples JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const FactorizationCandidate& c) {
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& e : c) seq.push_back(e.to_string());
  return {{"sequence", seq}, {"description", describe_candidate(c)}, {"builtin", builtin_names_for(c)}};
}

}  // namespace headpose
