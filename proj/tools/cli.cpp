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

#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "headpose/headpose.hpp"
#include "json.hpp"

namespace headpose::cli {
namespace {

using nlohmann::json;

/// Bad flags or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

double parse_double_flag(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("bad number '" + std::string(s) + "' in " + what);
  return v;
}

std::pair<double, double> parse_image_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw UsageError("image size must look like WIDTHxHEIGHT, got '" + s + "'");
  const double w = parse_double_flag(std::string_view(s).substr(0, x), "--image-size");
  const double h = parse_double_flag(std::string_view(s).substr(x + 1), "--image-size");
  if (!(w > 0.0) || !(h > 0.0)) throw UsageError("image size must be positive");
  return {w, h};
}

AnnotationFormat format_for(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_format(flag);
  return path.ends_with(".csv") ? AnnotationFormat::Csv : AnnotationFormat::Json;
}

ConventionPtr convention_flag(const ConventionRegistry& reg, const std::string& name) {
  try {
    return reg.find(name);
  } catch (const Unsupported& e) {
    throw UsageError(e.what());
  }
}

BasisChange pair_flag(const BasisRegistry& basis, const std::string& from, const std::string& to) {
  try {
    return basis.find(from, to);
  } catch (const Unsupported& e) {
    throw UsageError(e.what());
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_text_file(path, text);
}

json read_json_file(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": invalid JSON: " + e.what());
  }
}

json degrees(const EulerAngles& e) {
  return {{"pitch", rad2deg(e.pitch)}, {"yaw", rad2deg(e.yaw)}, {"roll", rad2deg(e.roll)}};
}

/// Cache for `r` under `conv`: the first in-range solution, if it reconstructs `r`.
std::optional<EulerAngles> fresh_cache(const RotationMatrix& r, const ConventionPtr& conv) {
  auto e = select_in_ranges(extract(r, conv), conv);
  if (e && frobenius_distance(euler_to_matrix(*e), r) > 1e-9) e.reset();
  return e;
}

std::vector<AugmentOp> parse_ops(const std::string& spec, bool reduce_flip_angle) {
  if (spec == "hflip") return {AugmentOp::flip(kPi / 2.0)};
  if (spec == "vflip") return {AugmentOp::flip(0.0)};
  if (spec == "diagflip") return {AugmentOp::flip(kPi / 4.0)};
  if (spec == "bothflip") return {AugmentOp::both_axes()};
  if (spec == "pixel") return {AugmentOp::pixel_only()};
  if (spec.starts_with("rotate:"))
    return {AugmentOp::rotate(deg2rad(parse_double_flag(std::string_view(spec).substr(7), "--op")))};
  if (spec.starts_with("flip:")) {
    const double deg = parse_double_flag(std::string_view(spec).substr(5), "--op");
    if (deg >= 0.0 && deg <= 90.0) return {AugmentOp::flip(deg2rad(deg))};
    if (reduce_flip_angle) return reduce_flip(deg2rad(deg));
    throw UsageError("flip angle " + spec.substr(5) + " is outside [0, 90]; pass --reduce-flip to reduce it");
  }
  throw UsageError("unknown op '" + spec + "' (rotate:<deg>, flip:<deg>, hflip, vflip, bothflip, diagflip, pixel)");
}

std::string file_stem(const std::string& image_id) {
  std::string s = image_id;
  for (auto& c : s)
    if (c == '/' || c == '\\') c = '_';
  return s;
}

json pose_report(const RotationMatrix& r) {
  const auto res = extract_300wlp(r);
  const auto sel = whenet_select_euler(res);
  json j{{"rotation", r.matrix().data()}, {"gimbal_lock", res.gimbal_lock}};
  j["euler_deg"] = sel ? degrees(*sel) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------

struct Common {
  std::string conventions_file;
};

struct ExtractArgs {
  std::string input, format, convention, output;
  bool both = false;
};

struct ConvertArgs {
  std::string input, format, from, to, output, output_format = "json";
  bool report = false;
};

struct AugmentArgs {
  std::string input, format, op, image_size, output, output_format;
  bool reduce = false;
};

struct DrawArgs {
  std::string input, format, style = "lines", image_size = "640x480", out_dir;
  double size = 100.0;
};

struct InferArgs {
  std::string pattern, samples;
  int sample_count = 32;
  std::uint64_t seed = 0;
  bool report = false;
};

struct AlignArgs {
  std::string model, observed, camera, formula = "panoptic";
  double threshold = 0.1;
  std::size_t min_points = 6;
};

int cmd_extract(const ExtractArgs& a, const ConventionRegistry& reg, std::ostream& out) {
  const auto records = load_annotations(a.input, format_for(a.format, a.input), reg);
  const auto& basis = BasisRegistry::builtin();
  const ConventionPtr forced = a.convention.empty() ? nullptr : convention_flag(reg, a.convention);
  json rows = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto conv = forced ? forced : reg.find(rec.source_convention);
    RotationMatrix r = rec.rotation;
    if (conv->name != rec.source_convention)
      r = convert_rotation(r, pair_flag(basis, rec.source_convention, conv->name));
    const auto res = extract(r, conv);
    const auto row = [&](const EulerAngles& e, int k) {
      json j{{"image_id", rec.image_id},
             {"convention", conv->name},
             {"solution", k},
             {"pitch_deg", rad2deg(e.pitch)},
             {"yaw_deg", rad2deg(e.yaw)},
             {"roll_deg", rad2deg(e.roll)},
             {"in_range", within_ranges(*conv, e.pitch, e.yaw, e.roll)},
             {"gimbal_lock", res.gimbal_lock}};
      j["constraint_note"] = res.constraint_note ? json(*res.constraint_note) : json(nullptr);
      return j;
    };
    rows.push_back(row(res.primary, 1));
    if (a.both && res.secondary) rows.push_back(row(*res.secondary, 2));
  }
  emit(json{{"rows", rows}}.dump(2) + "\n", a.output, out);
  return kOk;
}

int cmd_convert(const ConvertArgs& a, const ConventionRegistry& reg, std::ostream& out) {
  const auto from = convention_flag(reg, a.from);
  const auto to = convention_flag(reg, a.to);
  const auto& basis = BasisRegistry::builtin();
  const auto change = pair_flag(basis, from->name, to->name);
  const auto out_format = parse_format(a.output_format);
  if (a.report && out_format != AnnotationFormat::Json)
    throw UsageError("--report-error needs JSON output");
  const auto records = load_annotations(a.input, format_for(a.format, a.input), reg);

  std::vector<PoseAnnotation> converted;
  json items = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.source_convention != from->name)
      throw ValidationError("record is in " + rec.source_convention + ", not " + from->name, i);
    PoseAnnotation c = rec;
    c.rotation = convert_rotation(rec.rotation, change);
    c.source_convention = to->name;
    c.euler_cache = fresh_cache(c.rotation, to);
    auto j = to_json(c);
    if (a.report) j["roundtrip_frobenius"] = roundtrip_error(rec.rotation, from, to, basis);
    items.push_back(j);
    converted.push_back(std::move(c));
  }
  if (out_format == AnnotationFormat::Json)
    emit(json{{"annotations", items}}.dump(2) + "\n", a.output, out);
  else
    emit(annotations_to_csv(converted, reg), a.output, out);
  return kOk;
}

int cmd_augment(const AugmentArgs& a, const ConventionRegistry& reg, std::ostream& out) {
  const auto ops = parse_ops(a.op, a.reduce);
  const auto [w, h] = parse_image_size(a.image_size);
  const auto in_format = format_for(a.format, a.input);
  const auto records = load_annotations(a.input, in_format, reg);
  std::vector<PoseAnnotation> result;
  result.reserve(records.size());
  for (const auto& rec : records) {
    PoseAnnotation cur = rec;
    for (const auto& op : ops) cur = augment_annotation(cur, op, w, h, reg);
    result.push_back(std::move(cur));
  }
  const auto out_format = a.output_format.empty() ? in_format : parse_format(a.output_format);
  emit(out_format == AnnotationFormat::Json ? annotations_to_json(result).dump(2) + "\n"
                                            : annotations_to_csv(result, reg),
       a.output, out);
  return kOk;
}

int cmd_draw(const DrawArgs& a, const ConventionRegistry& reg, std::ostream& out) {
  if (!(a.size > 0.0) || !std::isfinite(a.size)) throw UsageError("--size must be positive");
  const auto [w, h] = parse_image_size(a.image_size);
  const auto records = load_annotations(a.input, format_for(a.format, a.input), reg);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec || !std::filesystem::is_directory(a.out_dir))
    throw IoError("cannot create output directory " + a.out_dir);

  json files = json::array();
  for (const auto& rec : records) {
    const auto conv = reg.find(rec.source_convention);
    const Point2 origin = rec.bbox ? Point2{rec.bbox->x + rec.bbox->w / 2.0, rec.bbox->y + rec.bbox->h / 2.0}
                                   : Point2{w / 2.0, h / 2.0};
    const auto path = (std::filesystem::path(a.out_dir) / (file_stem(rec.image_id) + ".svg")).string();
    json entry{{"image_id", rec.image_id}, {"file", path}, {"style", a.style}};
    const int iw = static_cast<int>(std::lround(w)), ih = static_cast<int>(std::lround(h));
    if (a.style == "cube") {
      write_text_file(path, emit_svg(pose_cube(rec.rotation, *conv, origin, a.size), iw, ih));
    } else {
      const auto proj = three_line_endpoints(rec.rotation, *conv, origin, a.size);
      write_text_file(path, emit_svg(proj, iw, ih));
      entry["endpoints"] = to_json(proj);
    }
    files.push_back(entry);
  }
  out << json{{"files", files}}.dump(2) << "\n";
  return kOk;
}

int cmd_infer(const InferArgs& a, std::ostream& out) {
  std::vector<FactorizationCandidate> cands;
  std::string mode;
  if (!a.pattern.empty()) {
    mode = "pattern";
    cands = match_pattern(pattern_from_json(read_json_file(a.pattern)), a.sample_count, a.seed);
  } else {
    mode = "samples";
    const auto [samples, hint] = samples_from_json(read_json_file(a.samples));
    cands = infer_from_numeric_samples(samples, hint);
  }
  if (a.report) {
    out << cands.size() << " matching factorization" << (cands.size() == 1 ? "" : "s") << " (" << mode
        << ")\n";
    for (std::size_t i = 0; i < cands.size(); ++i) {
      out << "  " << i + 1 << ". " << describe_candidate(cands[i]);
      const auto names = builtin_names_for(cands[i]);
      for (const auto& n : names) out << " [" << n << "]";
      out << "\n";
    }
    return kOk;
  }
  json list = json::array();
  for (const auto& c : cands) list.push_back(to_json(c));
  out << json{{"mode", mode}, {"count", cands.size()}, {"candidates", list}}.dump(2) << "\n";
  return kOk;
}

int cmd_align(const AlignArgs& a, std::ostream& out) {
  KeypointSet model = keypoints_from_json(read_json_file(a.model));
  const json observed_json = read_json_file(a.observed);
  KeypointSet observed = keypoints_from_json(observed_json);
  if (const auto conf = confidence_from_json(observed_json)) {
    auto [m, o] = filter_by_confidence(model, observed, *conf, a.threshold, a.min_points);
    model = std::move(m);
    observed = std::move(o);
  }
  CameraExtrinsic cam;
  if (!a.camera.empty()) cam = camera_from_json(read_json_file(a.camera));
  const auto al = horn_align(model, observed);
  const auto whenet = whenet_compound_pose(al.rotation, cam);
  const auto panoptic = panoptic_pose(al.rotation, cam);
  out << json{{"alignment", to_json(al)},
              {"formula", a.formula},
              {"pose", pose_report(a.formula == "whenet" ? whenet : panoptic)},
              {"whenet", pose_report(whenet)},
              {"panoptic", pose_report(panoptic)}}
             .dump(2)
      << "\n";
  return kOk;
}

int report(std::ostream& err, int code, const std::string& type, const std::string& message,
           std::optional<std::size_t> record = std::nullopt) {
  json e{{"type", type}, {"message", message}};
  e["record"] = record ? json(*record) : json(nullptr);
  err << json{{"error", e}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Head-pose rotation toolkit: Euler extraction, conversion, augmentation, drawing, "
               "convention inference and keypoint alignment. Angles are in degrees."};
  app.name(args.empty() ? "headpose" : args[0]);
  app.require_subcommand(1);
  Common common;
  app.add_option("--conventions", common.conventions_file, "JSON file with extra conventions");

  ExtractArgs ex;
  auto* s_extract = app.add_subcommand("extract", "Euler angles of each record");
  s_extract->add_option("--input", ex.input, "annotation file")->required();
  s_extract->add_option("--format", ex.format, "json or csv (default: from extension)")
      ->check(CLI::IsMember({"json", "csv"}));
  s_extract->add_option("--convention", ex.convention, "extract under this convention");
  s_extract->add_flag("--both-solutions", ex.both, "emit both solutions when not at gimbal lock");
  s_extract->add_option("--output", ex.output, "output file (default: stdout)");

  ConvertArgs cv;
  auto* s_convert = app.add_subcommand("convert", "Move records to another rotation system");
  s_convert->add_option("--input", cv.input, "annotation file")->required();
  s_convert->add_option("--format", cv.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  s_convert->add_option("--from", cv.from, "source convention")->required();
  s_convert->add_option("--to", cv.to, "target convention")->required();
  s_convert->add_flag("--report-error", cv.report, "add the round-trip Frobenius error per record");
  s_convert->add_option("--output", cv.output, "output file (default: stdout)");
  s_convert->add_option("--output-format", cv.output_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  AugmentArgs au;
  auto* s_augment = app.add_subcommand("augment", "Update labels for an image rotation or flip");
  s_augment->add_option("--input", au.input, "annotation file")->required();
  s_augment->add_option("--format", au.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  s_augment->add_option("--op", au.op, "rotate:<deg>|flip:<deg>|hflip|vflip|bothflip|diagflip|pixel")
      ->required();
  s_augment->add_option("--image-size", au.image_size, "WIDTHxHEIGHT")->required();
  s_augment->add_flag("--reduce-flip", au.reduce, "accept flip angles outside [0, 90]");
  s_augment->add_option("--output", au.output, "output file (default: stdout)");
  s_augment->add_option("--output-format", au.output_format, "json or csv (default: input format)")
      ->check(CLI::IsMember({"json", "csv"}));

  DrawArgs dr;
  auto* s_draw = app.add_subcommand("draw", "One SVG per record");
  s_draw->add_option("--input", dr.input, "annotation file")->required();
  s_draw->add_option("--format", dr.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  s_draw->add_option("--style", dr.style, "lines or cube")->check(CLI::IsMember({"lines", "cube"}));
  s_draw->add_option("--size", dr.size, "axis length in pixels");
  s_draw->add_option("--image-size", dr.image_size, "WIDTHxHEIGHT");
  s_draw->add_option("--out-dir", dr.out_dir, "output directory")->required();

  InferArgs in;
  auto* s_infer = app.add_subcommand("infer", "Find elemental factorizations matching a pattern or samples");
  auto* o_pattern = s_infer->add_option("--pattern", in.pattern, "3x3 pattern JSON");
  auto* o_samples = s_infer->add_option("--samples", in.samples, "(angles, matrix) samples JSON");
  o_pattern->excludes(o_samples);
  s_infer->add_option("--sample-count", in.sample_count, "random triples per candidate")
      ->check(CLI::Range(16, 100000));
  s_infer->add_option("--seed", in.seed, "random seed");
  s_infer->add_flag("--report", in.report, "human-readable report instead of JSON");

  AlignArgs al;
  auto* s_align = app.add_subcommand("align", "Horn alignment and compound head pose");
  s_align->add_option("--model", al.model, "model keypoints JSON")->required();
  s_align->add_option("--observed", al.observed, "observed keypoints JSON")->required();
  s_align->add_option("--camera", al.camera, "camera extrinsic JSON (default: identity)");
  s_align->add_option("--formula", al.formula, "whenet or panoptic")
      ->check(CLI::IsMember({"whenet", "panoptic"}));
  s_align->add_option("--confidence-threshold", al.threshold, "keypoint confidence cut");
  s_align->add_option("--min-points", al.min_points, "keypoints required after the cut");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("headpose");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      return report(err, kUsage, "usage", e.what());
    }
    if (s_infer->parsed() && in.pattern.empty() && in.samples.empty())
      throw UsageError("infer needs --pattern or --samples");

    ConventionRegistry reg = ConventionRegistry::builtin();
    if (!common.conventions_file.empty()) {
      const auto extra = registry_from_json(read_json_file(common.conventions_file));
      for (const auto& c : extra.all()) reg.add(c);
    }

    if (s_extract->parsed()) return cmd_extract(ex, reg, out);
    if (s_convert->parsed()) return cmd_convert(cv, reg, out);
    if (s_augment->parsed()) return cmd_augment(au, reg, out);
    if (s_draw->parsed()) return cmd_draw(dr, reg, out);
    if (s_infer->parsed()) return cmd_infer(in, out);
    if (s_align->parsed()) return cmd_align(al, out);
    return report(err, kUsage, "usage", "no subcommand");
  } catch (const UsageError& e) {
    return report(err, kUsage, "usage", e.what());
  } catch (const Unsupported& e) {
    return report(err, kUsage, "unsupported", e.what());
  } catch (const RangeError& e) {
    return report(err, kUsage, "range", e.what());
  } catch (const ValidationError& e) {
    return report(err, kValidation, "validation", e.what(), e.record());
  } catch (const FormatError& e) {
    return report(err, kValidation, "format", e.what(), e.record());
  } catch (const IoError& e) {
    return report(err, kValidation, "io", e.what());
  } catch (const InvalidInput& e) {
    return report(err, kValidation, "invalid_input", e.what());
  } catch (const DegenerateGeometry& e) {
    return report(err, kNumeric, "degenerate", e.what());
  } catch (const Error& e) {
    return report(err, kNumeric, "numeric", e.what());
  } catch (const nlohmann::json::exception& e) {
    return report(err, kValidation, "format", e.what());
  } catch (const std::exception& e) {
    return report(err, kNumeric, "internal", e.what());
  }
}

}  // namespace headpose::cli
