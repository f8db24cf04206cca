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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "headpose/headpose.hpp"
#include "oracles.hpp"

namespace {

using namespace headpose;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RotationMatrix haar(std::mt19937_64& rng) { return RotationMatrix::from(oracle::haar(rng)); }

Outcome round_trip_fidelity() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t whenet_selected = 0;
  for (const auto& conv : builtin_conventions()) {
    for (int i = 0; i < 10000; ++i) {
      const auto r = haar(rng);
      const auto res = extract(r, conv);
      for (const auto* e : {&res.primary, res.secondary ? &*res.secondary : nullptr}) {
        if (!e) continue;
        worst = std::max(worst, frobenius_distance(sequence_product(conv->sequence, e->pitch, e->yaw, e->roll), r));
      }
      if (const auto sel = select_in_ranges(res, conv)) {
        worst = std::max(worst, frobenius_distance(euler_to_matrix(*sel), r));
        if (conv->name == "WHENET_PANOPTIC") ++whenet_selected;
      } else if (conv->name != "WHENET_PANOPTIC") {
        return {false, conv->name + ": no in-range solution for a Haar sample"};
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t <= 5.0,
          "max Frobenius " + fmt("%.3g", worst) + " over 10000 rotations x " +
              std::to_string(builtin_conventions().size()) + " conventions, " + fmt("%.2f", t) + " s (WHENET in-range " +
              std::to_string(whenet_selected) + "/10000)"};
}

Outcome gimbal_reproduction() {
  const auto r = euler_to_matrix(w300lp(), deg2rad(-16.090911401458296), deg2rad(-89.9985818251308),
                                 deg2rad(-6.854511900533989));
  const auto res = extract_300wlp(r);
  if (!res.gimbal_lock || !res.constraint) return {false, "gimbal branch not taken"};
  const double sum = rad2deg(res.primary.pitch + res.primary.roll);
  return {std::abs(sum - -22.94542388660367) <= 1e-6, "p + r = " + fmt("%.12f", sum) + " deg; " + res.constraint_note.value_or("")};
}

double line_dev(const LineProjection& a, const LineProjection& b) {
  return std::max({(a.x_axis_end - b.x_axis_end).norm(), (a.y_axis_end - b.y_axis_end).norm(),
                   (a.z_axis_end - b.z_axis_end).norm(), (a.origin - b.origin).norm()});
}

Outcome draw_equivalence() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(-180.0 + 1e-9, 180.0);
  std::vector<std::array<double, 3>> poses{{6.208, 5.876, -1.694}, {-17.325, -49.589, 11.423}, {-7.601, -54.009, 4.450}};
  for (int i = 0; i < 10000; ++i) poses.push_back({u(rng), u(rng), u(rng)});
  double worst = 0.0;
  for (const auto& p : poses) {
    const auto r = euler_to_matrix(w300lp(), deg2rad(p[0]), deg2rad(p[1]), deg2rad(p[2]));
    worst = std::max(worst, line_dev(three_line_endpoints(r, *w300lp(), {320, 240}, 100),
                                     draw_axis_reference(p[0], p[1], p[2], {320, 240}, 100)));
  }
  return {worst <= 1e-9, "max endpoint deviation " + fmt("%.3g", worst) + " px over " + std::to_string(poses.size()) +
                             " poses"};
}

Outcome conversion_fidelity() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  std::vector<PoseAnnotation> recs;
  for (int i = 0; i < 10000; ++i) {
    const auto r = haar(rng);
    worst = std::max(worst, roundtrip_error(r, w300lp(), wiki_zyx()));
    worst = std::max(worst, roundtrip_error(convert_rotation(r, basis_w2s()), wiki_zyx(), w300lp()));
    recs.push_back({"r" + std::to_string(i), std::nullopt, r, std::nullopt, "W300LP"});
  }
  // The same figure through the command line's per-record report.
  const auto dir = std::filesystem::temp_directory_path() / "headpose_acceptance";
  std::filesystem::create_directories(dir);
  const auto in = (dir / "poses.json").string();
  save_annotations(recs, in, AnnotationFormat::Json);
  std::ostringstream out, err;
  const int code = cli::run({"headpose", "convert", "--input", in, "--from", "W300LP", "--to", "WIKI_ZYX",
                             "--report-error"},
                            out, err);
  std::filesystem::remove_all(dir);
  if (code != 0) return {false, "convert exited with " + std::to_string(code) + ": " + err.str()};
  const auto items = nlohmann::json::parse(out.str())["annotations"];
  double cli_worst = 0.0;
  for (const auto& it : items) cli_worst = std::max(cli_worst, it["roundtrip_frobenius"].get<double>());
  return {worst <= 1e-12 && cli_worst <= 1e-12 && items.size() == 10000,
          "library max " + fmt("%.3g", worst) + ", command-line report max " + fmt("%.3g", cli_worst) +
              " over 10000 poses"};
}

Outcome inference_uniqueness() {
  std::ifstream in(std::string(HEADPOSE_DATA_DIR) + "/3ddfa_pattern.json");
  const auto pattern = pattern_from_json(nlohmann::json::parse(in));
  const Sequence expected{ElementalSpec::parse("Z+roll"), ElementalSpec::parse("Y-yaw"), ElementalSpec::parse("X+pitch")};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto found = match_pattern(pattern, 32, seed);
    if (found.size() != 1 || found[0] != expected)
      return {false, "seed " + std::to_string(seed) + " gave " + std::to_string(found.size()) + " candidates"};
  }
  const auto all = match_pattern(EntryPattern::all_free()).size();
  return {all == 288, "1 candidate (" + describe_candidate(expected) + ") in 100/100 seeds; all-free gives " +
                          std::to_string(all)};
}

Outcome repnet_inverse() {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(-kPi + 1e-9, kPi);
  double worst_m = 0.0, worst_a = 0.0;
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), y = u(rng), r = u(rng);
    const auto w = euler_to_matrix(w300lp(), p, y, r);
    const auto six = euler_to_matrix(repnet6d(), p, y, r);
    worst_m = std::max(worst_m, frobenius_distance(six.matrix(), w.matrix().transposed()));
    const auto ref = extract_300wlp(w);
    if (ref.gimbal_lock || std::abs(std::cos(ref.primary.yaw)) < 1e-3) continue;
    const auto e = extract_repnet(w.transposed());
    ++compared;
    worst_a = std::max({worst_a, std::abs(angle_difference(e.pitch, ref.primary.pitch)),
                        std::abs(angle_difference(e.yaw, ref.primary.yaw)),
                        std::abs(angle_difference(e.roll, ref.primary.roll))});
  }
  return {worst_m <= 1e-12 && worst_a <= 1e-9,
          "matrix gap " + fmt("%.3g", worst_m) + ", angle gap " + fmt("%.3g", worst_a) + " rad over " +
              std::to_string(compared) + " non-singular triples"};
}

Outcome augmentation_algebra() {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> theta(0.0, kPi / 2), phi(-2 * kPi, 2 * kPi);
  double inv = 0.0, both = 0.0, add = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = haar(rng);
    const double t = theta(rng), a = phi(rng), b = phi(rng);
    inv = std::max(inv, frobenius_distance(flip_pose(flip_pose(r, t), t), r));
    both = std::max(both, (both_axes_flip(r).matrix() - rotate_pose(r, kPi).matrix()).max_abs());
    add = std::max(add, frobenius_distance(rotate_pose(r, a + b), rotate_pose(rotate_pose(r, a), b)));
  }
  return {inv <= 1e-12 && both <= 1e-15 && add <= 1e-12,
          "involution " + fmt("%.3g", inv) + ", both-axes vs half turn " + fmt("%.3g", both) + ", additivity " +
              fmt("%.3g", add) + " over 10000 poses"};
}

Outcome horn_recovery() {
  const auto model = reference_head(1.0, 0.0);
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> s(0.5, 3.0), t(-50.0, 50.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto r0 = haar(rng);
    const double s0 = s(rng);
    const Vec3 t0{t(rng), t(rng), t(rng)};
    const auto a = horn_align(model, transform_points(model, s0, r0, t0));
    worst = std::max({worst, frobenius_distance(a.rotation, r0), std::abs(a.scale - s0), (a.translation - t0).norm()});
  }
  std::normal_distribution<double> noise(0.0, 0.01);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    const auto r0 = haar(rng);
    auto obs = transform_points(model, 1.0, r0, {});
    for (auto& p : obs.points) p += Vec3{noise(rng), noise(rng), noise(rng)};
    good += geodesic_distance(horn_align(model, obs).rotation, r0) <= 0.05;
  }
  return {worst <= 1e-9 && good >= 95,
          "exact max error " + fmt("%.3g", worst) + " over 1000 trials; noisy within 0.05 rad in " +
              std::to_string(good) + "/100"};
}

Outcome whenet_vs_panoptic() {
  const auto r0 = euler_to_matrix(w300lp(), deg2rad(12), deg2rad(-35), deg2rad(8));
  const auto model = reference_head();
  const auto observed = transform_points(model, 1.0, compose(inverse(e_ref()), r0), {0.1, -0.2, 3.0});
  const auto a = horn_align(model, observed);
  const CameraExtrinsic cam;
  const double dp = frobenius_distance(panoptic_pose(a.rotation, cam), r0);
  const double dw = frobenius_distance(whenet_compound_pose(a.rotation, cam), r0);
  return {dp <= 1e-6 && dw > 0.1, "corrected formula off by " + fmt("%.3g", dp) + ", original formula off by " +
                                      fmt("%.3g", dw)};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"round-trip fidelity", round_trip_fidelity},
      {"gimbal-lock reproduction", gimbal_reproduction},
      {"draw_axis equivalence", draw_equivalence},
      {"conversion fidelity", conversion_fidelity},
      {"inference uniqueness", inference_uniqueness},
      {"6D-RepNet inverse relation", repnet_inverse},
      {"augmentation algebra", augmentation_algebra},
      {"Horn recovery", horn_recovery},
      {"WHENet vs corrected formula", whenet_vs_panoptic},
  };
  bool all = true;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str());
  }
  const double t = seconds_since(t0);
  const bool fast = t < 60.0;
  all = all && fast;
  std::printf("%s criterion 10: suite runtime: criteria 1-9 finished in %.2f s (limit 60 s); dataset-scale results are "
              "out of scope\n",
              fast ? "PASS" : "FAIL", t);
  return all ? 0 : 1;
}
