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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "headpose/horn_align.hpp"
#include "oracles.hpp"

namespace {

using namespace headpose;

KeypointSet head() { return reference_head(1.0, 0.0); }

TEST(ReferenceHead, CountAndFirstPoint) {
  const auto& pts = reference_head_points();
  ASSERT_EQ(pts.size(), 58u);
  EXPECT_EQ(pts[0], (Vec3{-7.308957, 0.913869, 0.0}));
  EXPECT_EQ(head().points[0], pts[0]);
  EXPECT_EQ(reference_head().size(), 58u);
  EXPECT_THROW(reference_head(0.0), InvalidInput);
}

TEST(ReferenceHead, MirrorSymmetricInX) {
  const auto& pts = reference_head_points();
  for (const auto& p : pts) {
    const bool found = std::any_of(pts.begin(), pts.end(), [&](const Vec3& q) {
      return (q - Vec3{-p.x, p.y, p.z}).norm() <= 1e-6;
    });
    EXPECT_TRUE(found) << p.x << " " << p.y << " " << p.z;
  }
}

TEST(ReferenceHead, DefaultPreRotation) {
  const auto k = reference_head();
  const Mat3 r = oracle::w300lp(oracle::rad(10), 0, 0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Vec3 expected = r * (reference_head_points()[i] * 0.01);
    EXPECT_LE((k.points[i] - expected).norm(), 1e-15);
  }
}

TEST(HornAlign, IdentityInput) {
  const auto a = horn_align(head(), head());
  EXPECT_LE(frobenius_distance(a.rotation, RotationMatrix::identity()), 1e-12);
  EXPECT_NEAR(a.scale, 1.0, 1e-12);
  EXPECT_LE(a.translation.norm(), 1e-12);
  EXPECT_LE(a.residual, 1e-12);
}

TEST(HornAlign, RecoversKnownSimilarity) {
  std::mt19937_64 rng(71);
  const auto r0 = RotationMatrix::from(oracle::haar(rng));
  const auto a = horn_align(head(), transform_points(head(), 2.0, r0, {1, 2, 3}));
  EXPECT_LE(frobenius_distance(a.rotation, r0), 1e-9);
  EXPECT_NEAR(a.scale, 2.0, 1e-9);
  EXPECT_LE((a.translation - Vec3{1, 2, 3}).norm(), 1e-9);
  EXPECT_LE(a.residual, 1e-9);
}

TEST(HornAlign, RandomSimilaritySweep) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> s(0.5, 3.0), t(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const auto r0 = RotationMatrix::from(oracle::haar(rng));
    const double s0 = s(rng);
    const Vec3 t0{t(rng), t(rng), t(rng)};
    const auto a = horn_align(head(), transform_points(head(), s0, r0, t0));
    EXPECT_LE(frobenius_distance(a.rotation, r0), 1e-9);
    EXPECT_NEAR(a.scale, s0, 1e-9);
    EXPECT_LE((a.translation - t0).norm(), 1e-9);
  }
}

TEST(HornAlign, AgreesWithSvdOracleUnderNoise) {
  std::mt19937_64 rng(73);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    const auto r0 = RotationMatrix::from(oracle::haar(rng));
    auto obs = transform_points(head(), 1.7, r0, {4, -2, 9});
    for (auto& p : obs.points) p += Vec3{noise(rng), noise(rng), noise(rng)};
    const auto a = horn_align(head(), obs);
    const auto o = oracle::umeyama(head().points, obs.points);
    EXPECT_LE(oracle::max_abs_diff(a.rotation.matrix(), o.r), 1e-9);
    EXPECT_NEAR(a.scale, o.s, 1e-9);
    EXPECT_LE((a.translation - o.t).norm(), 1e-8);
    double sq = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const Vec3 d = o.r * head().points[k] * o.s + o.t - obs.points[k];
      sq += d.dot(d);
    }
    EXPECT_NEAR(a.residual, std::sqrt(sq / static_cast<double>(obs.size())), 1e-9);
  }
}

TEST(HornAlign, NoisyRecoveryMonteCarlo) {
  std::mt19937_64 rng(74);
  std::normal_distribution<double> noise(0.0, 0.01);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    const auto r0 = RotationMatrix::from(oracle::haar(rng));
    auto obs = transform_points(head(), 1.0, r0, {0, 0, 0});
    for (auto& p : obs.points) p += Vec3{noise(rng), noise(rng), noise(rng)};
    good += geodesic_distance(horn_align(head(), obs).rotation, r0) <= 0.05;
  }
  EXPECT_EQ(good, 100);
}

TEST(HornAlign, PermutationInvariant) {
  std::mt19937_64 rng(75);
  std::normal_distribution<double> noise(0.0, 0.2);
  auto obs = transform_points(head(), 0.8, RotationMatrix::from(oracle::haar(rng)), {1, 1, 1});
  for (auto& p : obs.points) p += Vec3{noise(rng), noise(rng), noise(rng)};
  std::vector<std::size_t> idx(obs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  KeypointSet m2, o2;
  for (auto i : idx) {
    m2.points.push_back(head().points[i]);
    o2.points.push_back(obs.points[i]);
  }
  const auto a = horn_align(head(), obs), b = horn_align(m2, o2);
  EXPECT_LE(frobenius_distance(a.rotation, b.rotation), 1e-12);
  EXPECT_NEAR(a.scale, b.scale, 1e-12);
  EXPECT_NEAR(a.residual, b.residual, 1e-12);
}

TEST(HornAlign, Errors) {
  KeypointSet line;
  for (int i = 0; i < 10; ++i) line.points.push_back({double(i), 2.0 * i, -1.0 * i});
  EXPECT_THROW(horn_align(line, line), DegenerateGeometry);
  KeypointSet same;
  for (int i = 0; i < 5; ++i) same.points.push_back({1, 2, 3});
  EXPECT_THROW(horn_align(same, same), DegenerateGeometry);
  auto shorter = head();
  shorter.points.pop_back();
  EXPECT_THROW(horn_align(head(), shorter), InvalidInput);
  KeypointSet two{{{0, 0, 0}, {1, 0, 0}}, {}};
  EXPECT_THROW(horn_align(two, two), InvalidInput);
  // A planar set is still rank 2 and aligns.
  KeypointSet plane{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, {}};
  const auto r0 = elemental(Axis::Y, Handedness::Right, 0.7);
  EXPECT_LE(frobenius_distance(horn_align(plane, transform_points(plane, 1.0, r0, {})).rotation, r0), 1e-12);
}

TEST(CompoundPose, Eref) {
  const Mat3 e = e_ref().matrix();
  EXPECT_EQ(e, Mat3::diag(1, -1, -1));
  EXPECT_EQ(e * e, Mat3::identity());
  EXPECT_EQ(e.determinant(), 1.0);
  const CameraExtrinsic id;
  EXPECT_EQ(whenet_compound_pose(RotationMatrix::identity(), id), RotationMatrix::identity());
  EXPECT_EQ(panoptic_pose(RotationMatrix::identity(), id), e_ref());
}

TEST(CompoundPose, WhenetConjugationInvolution) {
  std::mt19937_64 rng(76);
  const CameraExtrinsic id;
  for (int i = 0; i < 100; ++i) {
    const auto r = RotationMatrix::from(oracle::haar(rng));
    EXPECT_LE(frobenius_distance(whenet_compound_pose(whenet_compound_pose(r, id), id), r), 1e-15);
  }
}

TEST(CompoundPose, WhenetDiffersByRightEref) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto r = RotationMatrix::from(oracle::haar(rng));
    const CameraExtrinsic cam{RotationMatrix::from(oracle::haar(rng)), {1, 2, 3}};
    const Mat3 w = whenet_compound_pose(r, cam).matrix();
    const Mat3 p = panoptic_pose(r, cam).matrix();
    EXPECT_LE(oracle::max_abs_diff(w, p * Mat3::diag(1, -1, -1)), 1e-14);
    EXPECT_GT(oracle::frob(w, p), 1e-3);
  }
}

TEST(CompoundPose, SyntheticPanopticRecovery) {
  const auto r0 = euler_to_matrix(w300lp(), deg2rad(12), deg2rad(-35), deg2rad(8));
  const auto model = reference_head();
  const auto observed = transform_points(model, 1.0, compose(inverse(e_ref()), r0), {0, 0, 0});
  const auto a = horn_align(model, observed);
  const CameraExtrinsic id;
  EXPECT_LE(frobenius_distance(panoptic_pose(a.rotation, id), r0), 1e-9);
  EXPECT_GT(frobenius_distance(whenet_compound_pose(a.rotation, id), r0), 1.0);
  // Non-identity camera: observed points in camera frame C^-1.
  std::mt19937_64 rng(78);
  const CameraExtrinsic cam{RotationMatrix::from(oracle::haar(rng)), {}};
  const auto obs2 = transform_points(model, 1.0, compose(inverse(cam.r), compose(inverse(e_ref()), r0)), {});
  EXPECT_LE(frobenius_distance(panoptic_pose(horn_align(model, obs2).rotation, cam), r0), 1e-9);
}

TEST(Confidence, Filter) {
  const auto m = head();
  std::vector<double> conf(m.size(), 0.05);
  for (std::size_t i = 0; i < 6; ++i) conf[i] = 0.9;
  const auto [fm, fo] = filter_by_confidence(m, m, conf);
  EXPECT_EQ(fm.size(), 6u);
  EXPECT_EQ(fo.points[5], m.points[5]);
  conf[5] = 0.1;  // at the threshold is rejected
  EXPECT_THROW(filter_by_confidence(m, m, conf), DegenerateGeometry);
  EXPECT_EQ(filter_by_confidence(m, m, conf, 0.1, 5).first.size(), 5u);
  EXPECT_THROW(filter_by_confidence(m, m, std::vector<double>(3, 1.0)), InvalidInput);
}

TEST(Json, KeypointsAndCamera) {
  const auto k = keypoints_from_json(to_json(head()));
  EXPECT_EQ(k.points, head().points);
  EXPECT_THROW(keypoints_from_json(nlohmann::json::parse("[[1, 2]]")), FormatError);
  const auto cam = camera_from_json(nlohmann::json::parse(R"({"R": [[1,0,0],[0,0,-1],[0,1,0]], "t": [1,2,3]})"));
  EXPECT_EQ(cam.r.matrix(), (Mat3{1, 0, 0, 0, 0, -1, 0, 1, 0}));
  EXPECT_EQ(cam.t, (Vec3{1, 2, 3}));
  EXPECT_THROW(camera_from_json(nlohmann::json::parse(R"({"R": [1,0,0,0,1,0,0,0,2]})")), InvalidInput);
  const auto conf = confidence_from_json(nlohmann::json::parse(R"({"points": [], "confidence": [0.5]})"));
  ASSERT_TRUE(conf.has_value());
  EXPECT_EQ(conf->size(), 1u);
}

}  // namespace
