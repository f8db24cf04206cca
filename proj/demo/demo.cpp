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

// Walks one label through the library: extract, convert, draw, augment,
// then the factorization search and the keypoint alignment.

#include <cstdio>

#include "headpose/headpose.hpp"

using namespace headpose;

namespace {

void print_angles(const char* what, const EulerAngles& e) {
  std::printf("  %-22s pitch %9.4f  yaw %9.4f  roll %9.4f  (%s)\n", what, rad2deg(e.pitch), rad2deg(e.yaw),
              rad2deg(e.roll), e.convention->name.c_str());
}

}  // namespace

int main() {
  // A 300W-LP label.
  const auto label = make_euler(w300lp(), deg2rad(-17.325), deg2rad(-49.589), deg2rad(11.423));
  const auto r = euler_to_matrix(label);
  const auto& m = r.matrix();
  std::printf("rotation:\n");
  for (int i = 0; i < 3; ++i) std::printf("  % .6f % .6f % .6f\n", m(i, 0), m(i, 1), m(i, 2));

  const auto both = extract_300wlp(r);
  std::printf("extraction:\n");
  print_angles("primary", both.primary);
  print_angles("secondary", *both.secondary);

  const auto wiki = convert_euler(label, wiki_zyx());
  std::printf("conversion (round trip %.2e):\n", roundtrip_error(label, wiki_zyx()));
  print_angles("as SciPy ZYX", wiki.primary);

  const auto lines = three_line_endpoints(r, *w300lp(), {320, 240}, 100);
  std::printf("drawing at (320, 240), size 100:\n  red (%.2f, %.2f)  green (%.2f, %.2f)  blue (%.2f, %.2f)\n",
              lines.x_axis_end.x, lines.x_axis_end.y, lines.y_axis_end.x, lines.y_axis_end.y, lines.z_axis_end.x,
              lines.z_axis_end.y);

  std::printf("augmentation:\n");
  print_angles("horizontal flip", extract_300wlp(horizontal_flip(r)).primary);
  print_angles("rotate 30 deg ccw", extract_300wlp(rotate_pose(r, deg2rad(30))).primary);

  const auto gimbal = extract_300wlp(
      euler_to_matrix(w300lp(), deg2rad(-16.090911401458296), deg2rad(-89.9985818251308), deg2rad(-6.854511900533989)));
  std::printf("near gimbal lock:\n  %s\n", gimbal.constraint_note.value_or("").c_str());

  const auto found = match_pattern(tddfa_pattern());
  std::printf("factorizations matching the 3DDFA pattern: %zu\n", found.size());
  for (const auto& c : found) std::printf("  %s\n", describe_candidate(c).c_str());

  const auto model = reference_head();
  const auto observed = transform_points(model, 2.0, compose(inverse(e_ref()), r), {0.5, 0.0, 4.0});
  const auto al = horn_align(model, observed);
  std::printf("alignment: scale %.6f, residual %.2e\n", al.scale, al.residual);
  std::printf("  corrected formula error %.2e, original formula error %.3f\n",
              frobenius_distance(panoptic_pose(al.rotation, {}), r),
              frobenius_distance(whenet_compound_pose(al.rotation, {}), r));
  return 0;
}
