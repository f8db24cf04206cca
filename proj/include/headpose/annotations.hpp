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

// Pose annotation records and their CSV / JSON files.
//
// The rotation matrix is the record; Euler angles are a cache tied to the
// record's source convention.
//
// CSV: image_id,pitch_deg,yaw_deg,roll_deg,convention[,bbox_x,bbox_y,bbox_w,bbox_h]
// JSON: {"annotations": [{"image_id", "bbox"?: [x,y,w,h], "rotation": [9 row-major],
//        "euler_deg"?: {"pitch","yaw","roll"}, "convention"}]}

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "headpose/conventions.hpp"
#include "headpose/errors.hpp"
#include "headpose/euler_extract.hpp"
#include "json.hpp"

namespace headpose {

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const BBox&) const = default;
};

struct PoseAnnotation {
  std::string image_id;
  std::optional<BBox> bbox;
  RotationMatrix rotation;
  std::optional<EulerAngles> euler_cache;
  std::string source_convention;
};

enum class AnnotationFormat { Json, Csv };

inline AnnotationFormat parse_format(std::string_view s) {
  if (s == "json") return AnnotationFormat::Json;
  if (s == "csv") return AnnotationFormat::Csv;
  throw InvalidInput("unknown annotation format '" + std::string(s) + "' (json or csv)");
}

/// Throws ValidationError (tagged with `record`) on the first broken invariant.
inline void validate_annotation(const PoseAnnotation& a, const ConventionRegistry& reg,
                                std::optional<std::size_t> record = std::nullopt) {
  if (a.image_id.empty()) throw ValidationError("empty image_id", record);
  if (!reg.contains(a.source_convention))
    throw ValidationError("unknown convention '" + a.source_convention + "'", record);
  if (a.bbox) {
    const auto& b = *a.bbox;
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) || !std::isfinite(b.h))
      throw ValidationError("bbox has non-finite values", record);
    if (!(b.w > 0.0) || !(b.h > 0.0)) throw ValidationError("bbox width and height must be positive", record);
  }
  if (a.euler_cache) {
    const auto& e = *a.euler_cache;
    if (!e.convention || e.convention->name != a.source_convention)
      throw ValidationError("Euler cache convention differs from the record's", record);
    try {
      const auto rebuilt = euler_to_matrix(e);
      if (frobenius_distance(rebuilt, a.rotation) > 1e-9)
        throw ValidationError("Euler cache does not reconstruct the rotation", record);
    } catch (const RangeError& err) {
      throw ValidationError(err.what(), record);
    }
  }
}

/// Angles to report for `a`: the cache if present, else the first extracted
/// solution inside the convention's ranges (the primary one if none fits).
inline EulerAngles euler_for(const PoseAnnotation& a, const ConventionRegistry& reg) {
  if (a.euler_cache) return *a.euler_cache;
  const auto conv = reg.find(a.source_convention);
  const auto res = extract(a.rotation, conv);
  if (auto e = select_in_ranges(res, conv)) return *e;
  return res.primary;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_number(std::string_view s, std::size_t record) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw FormatError("not a number: '" + std::string(s) + "'", record);
  if (!std::isfinite(v)) throw ValidationError("non-finite number", record);
  return v;
}

inline std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline PoseAnnotation from_euler_deg(std::string image_id, std::optional<BBox> bbox, double p, double y,
                                     double r, const std::string& conv_name,
                                     const ConventionRegistry& reg, std::size_t record) {
  if (!reg.contains(conv_name)) throw ValidationError("unknown convention '" + conv_name + "'", record);
  const auto conv = reg.find(conv_name);
  try {
    auto e = make_euler(conv, deg2rad(p), deg2rad(y), deg2rad(r));
    PoseAnnotation a{std::move(image_id), bbox, euler_to_matrix(e), e, conv_name};
    return a;
  } catch (const RangeError& err) {
    throw ValidationError(err.what(), record);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV

inline std::vector<PoseAnnotation> parse_annotations_csv(std::string_view text,
                                                         const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  std::vector<PoseAnnotation> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    const std::size_t idx = line_no++;
    if (line.empty()) continue;
    const auto f = detail::split_commas(line);
    if (idx == 0 && detail::trim(f[0]) == "image_id") continue;
    if (f.size() != 5 && f.size() != 9)
      throw FormatError("expected 5 or 9 comma-separated fields, got " + std::to_string(f.size()), idx);
    std::optional<BBox> bbox;
    const bool bbox_blank = f.size() == 9 && detail::trim(f[5]).empty() && detail::trim(f[6]).empty() &&
                            detail::trim(f[7]).empty() && detail::trim(f[8]).empty();
    if (f.size() == 9 && !bbox_blank)
      bbox = BBox{detail::parse_number(f[5], idx), detail::parse_number(f[6], idx),
                  detail::parse_number(f[7], idx), detail::parse_number(f[8], idx)};
    auto a = detail::from_euler_deg(std::string(detail::trim(f[0])), bbox, detail::parse_number(f[1], idx),
                                    detail::parse_number(f[2], idx), detail::parse_number(f[3], idx),
                                    std::string(detail::trim(f[4])), reg, idx);
    validate_annotation(a, reg, idx);
    out.push_back(std::move(a));
  }
  return out;
}

/// Degrees with 12 significant digits; a header row is always written.
inline std::string annotations_to_csv(const std::vector<PoseAnnotation>& records,
                                      const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  std::string s = "image_id,pitch_deg,yaw_deg,roll_deg,convention,bbox_x,bbox_y,bbox_w,bbox_h\n";
  for (const auto& a : records) {
    if (a.image_id.find(',') != std::string::npos) throw InvalidInput("image_id contains a comma: " + a.image_id);
    const auto e = euler_for(a, reg);
    s += a.image_id + "," + detail::fmt_g(rad2deg(e.pitch), 12) + "," + detail::fmt_g(rad2deg(e.yaw), 12) +
         "," + detail::fmt_g(rad2deg(e.roll), 12) + "," + a.source_convention;
    if (a.bbox)
      s += "," + detail::fmt_g(a.bbox->x, 12) + "," + detail::fmt_g(a.bbox->y, 12) + "," +
           detail::fmt_g(a.bbox->w, 12) + "," + detail::fmt_g(a.bbox->h, 12);
    else
      s += ",,,,";
    s += "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const PoseAnnotation& a) {
  nlohmann::json j;
  j["image_id"] = a.image_id;
  if (a.bbox) j["bbox"] = {a.bbox->x, a.bbox->y, a.bbox->w, a.bbox->h};
  j["rotation"] = a.rotation.matrix().data();
  if (a.euler_cache)
    j["euler_deg"] = {{"pitch", rad2deg(a.euler_cache->pitch)},
                      {"yaw", rad2deg(a.euler_cache->yaw)},
                      {"roll", rad2deg(a.euler_cache->roll)}};
  j["convention"] = a.source_convention;
  return j;
}

inline PoseAnnotation annotation_from_json(const nlohmann::json& j, std::size_t idx,
                                           const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  try {
    if (!j.is_object()) throw FormatError("annotation must be an object", idx);
    const auto id = j.at("image_id").get<std::string>();
    const auto conv_name = j.at("convention").get<std::string>();
    if (!reg.contains(conv_name)) throw ValidationError("unknown convention '" + conv_name + "'", idx);
    std::optional<BBox> bbox;
    if (j.contains("bbox") && !j.at("bbox").is_null()) {
      const auto& b = j.at("bbox");
      if (!b.is_array() || b.size() != 4) throw FormatError("bbox must be [x, y, w, h]", idx);
      bbox = BBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    }
    std::optional<EulerAngles> cache;
    if (j.contains("euler_deg") && !j.at("euler_deg").is_null()) {
      const auto& e = j.at("euler_deg");
      try {
        cache = make_euler(reg.find(conv_name), deg2rad(e.at("pitch").get<double>()),
                           deg2rad(e.at("yaw").get<double>()), deg2rad(e.at("roll").get<double>()));
      } catch (const RangeError& err) {
        throw ValidationError(err.what(), idx);
      }
    }
    PoseAnnotation a;
    a.image_id = id;
    a.bbox = bbox;
    a.source_convention = conv_name;
    a.euler_cache = cache;
    if (j.contains("rotation")) {
      const auto& r = j.at("rotation");
      if (!r.is_array() || r.size() != 9) throw FormatError("rotation must have 9 numbers", idx);
      std::array<double, 9> m{};
      for (std::size_t i = 0; i < 9; ++i) m[i] = r[i].get<double>();
      try {
        a.rotation = RotationMatrix::from(Mat3(m));
      } catch (const InvalidInput& err) {
        throw ValidationError(err.what(), idx);
      }
    } else if (cache) {
      a.rotation = euler_to_matrix(*cache);
    } else {
      throw FormatError("record needs a rotation or euler_deg", idx);
    }
    validate_annotation(a, reg, idx);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad annotation: ") + e.what(), idx);
  }
}

inline nlohmann::json annotations_to_json(const std::vector<PoseAnnotation>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : records) arr.push_back(to_json(a));
  return {{"annotations", arr}};
}

inline std::vector<PoseAnnotation> parse_annotations_json(std::string_view text,
                                                          const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  if (detail::trim(text).find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("annotations")) throw FormatError("missing \"annotations\" array");
    list = &j.at("annotations");
  }
  if (!list->is_array()) throw FormatError("\"annotations\" must be an array");
  std::vector<PoseAnnotation> out;
  out.reserve(list->size());
  for (std::size_t i = 0; i < list->size(); ++i) out.push_back(annotation_from_json((*list)[i], i, reg));
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<PoseAnnotation> load_annotations(const std::string& path, AnnotationFormat format,
                                                    const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  const auto text = read_text_file(path);
  return format == AnnotationFormat::Json ? parse_annotations_json(text, reg) : parse_annotations_csv(text, reg);
}

inline void save_annotations(const std::vector<PoseAnnotation>& records, const std::string& path,
                             AnnotationFormat format,
                             const ConventionRegistry& reg = ConventionRegistry::builtin()) {
  write_text_file(path, format == AnnotationFormat::Json ? annotations_to_json(records).dump(2) + "\n"
                                                         : annotations_to_csv(records, reg));
}

}  // namespace headpose
