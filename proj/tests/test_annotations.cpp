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

#include <filesystem>
#include <random>

#include "headpose/annotations.hpp"
#include "oracles.hpp"

namespace {

using namespace headpose;

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "headpose_test_annotations";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<PoseAnnotation> random_records(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(1.0, 200.0);
  const char* names[] = {"W300LP", "WIKI_ZYX", "TDDFA_V2", "REPNET6D"};
  std::vector<PoseAnnotation> out;
  for (int i = 0; i < n; ++i) {
    PoseAnnotation a;
    a.image_id = "img_" + std::to_string(i) + ".jpg";
    a.rotation = RotationMatrix::from(oracle::haar(rng));
    a.source_convention = names[i % 4];
    if (i % 3 != 0) a.bbox = BBox{box(rng), box(rng), box(rng), box(rng)};
    out.push_back(a);
  }
  return out;
}

TEST(Csv, TableRow) {
  const auto recs = parse_annotations_csv("img1.jpg,6.208,5.876,-1.694,W300LP\n");
  ASSERT_EQ(recs.size(), 1u);
  const auto& a = recs[0];
  EXPECT_EQ(a.image_id, "img1.jpg");
  EXPECT_EQ(a.source_convention, "W300LP");
  EXPECT_FALSE(a.bbox.has_value());
  EXPECT_LE(oracle::max_abs_diff(a.rotation.matrix(),
                                 oracle::w300lp(oracle::rad(6.208), oracle::rad(5.876), oracle::rad(-1.694))),
            1e-15);
  const auto e = extract_300wlp(a.rotation).primary;
  EXPECT_NEAR(rad2deg(e.pitch), 6.208, 1e-12);
  EXPECT_NEAR(rad2deg(e.yaw), 5.876, 1e-12);
  EXPECT_NEAR(rad2deg(e.roll), -1.694, 1e-12);
}

TEST(Csv, HeaderBboxAndBlankLines) {
  const auto recs = parse_annotations_csv(
      "image_id,pitch_deg,yaw_deg,roll_deg,convention,bbox_x,bbox_y,bbox_w,bbox_h\r\n"
      "a.jpg,1,2,3,WIKI_ZYX,10,20,30,40\r\n\n"
      "b.jpg,0,0,0,W300LP,,,,\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].bbox, (BBox{10, 20, 30, 40}));
  EXPECT_FALSE(recs[1].bbox.has_value());
  EXPECT_EQ(recs[1].rotation, RotationMatrix::identity());
}

TEST(Csv, Empty) {
  EXPECT_TRUE(parse_annotations_csv("").empty());
  EXPECT_TRUE(parse_annotations_csv("image_id,pitch_deg,yaw_deg,roll_deg,convention\n").empty());
  EXPECT_EQ(annotations_to_csv({}), "image_id,pitch_deg,yaw_deg,roll_deg,convention,bbox_x,bbox_y,bbox_w,bbox_h\n");
  EXPECT_TRUE(parse_annotations_csv(annotations_to_csv({})).empty());
}

TEST(Csv, YawOutOfRange) {
  try {
    parse_annotations_csv("image_id,pitch_deg,yaw_deg,roll_deg,convention\nok.jpg,0,0,0,W300LP\nbad.jpg,0,181,0,W300LP\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_TRUE(e.record().has_value());
    EXPECT_EQ(*e.record(), 2u);
  }
  EXPECT_NO_THROW(parse_annotations_csv("x,0,180,0,W300LP\n"));
  EXPECT_THROW(parse_annotations_csv("x,0,-180,0,W300LP\n"), ValidationError);
}

TEST(Csv, FormatErrorsCarryRecord) {
  try {
    parse_annotations_csv("a,1,2,3,W300LP\nb,1,two,3,W300LP\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.record(), std::optional<std::size_t>(1));
  }
  EXPECT_THROW(parse_annotations_csv("a,1,2,3\n"), FormatError);
  EXPECT_THROW(parse_annotations_csv("a,1,2,3,NOPE\n"), ValidationError);
  EXPECT_THROW(parse_annotations_csv("a,1,2,3,W300LP,0,0,-1,5\n"), ValidationError);
}

TEST(Csv, TwelveSignificantDigits) {
  PoseAnnotation a;
  a.image_id = "p.jpg";
  a.source_convention = "W300LP";
  a.rotation = euler_to_matrix(w300lp(), 0.123456789012345, -0.5, 0.25);
  const auto text = annotations_to_csv({a});
  const auto line = text.substr(text.find('\n') + 1);
  const auto pitch = line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1);
  char expected[64];
  std::snprintf(expected, sizeof expected, "%.12g", rad2deg(extract_300wlp(a.rotation).primary.pitch));
  EXPECT_EQ(pitch, expected);
  const auto back = parse_annotations_csv(text);
  EXPECT_NEAR(rad2deg(back[0].euler_cache->pitch), std::stod(expected), 0.0);
}

TEST(Csv, RoundTrip) {
  const auto recs = random_records(100, 81);
  const auto back = parse_annotations_csv(annotations_to_csv(recs));
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].image_id, recs[i].image_id);
    EXPECT_EQ(back[i].source_convention, recs[i].source_convention);
    // Twelve significant digits of degrees bound the drift near 1e-12 relative.
    EXPECT_LE(frobenius_distance(back[i].rotation, recs[i].rotation), 1e-9);
    EXPECT_EQ(back[i].bbox.has_value(), recs[i].bbox.has_value());
  }
}

TEST(Json, RoundTrip) {
  const auto recs = random_records(100, 82);
  const auto back = parse_annotations_json(annotations_to_json(recs).dump());
  ASSERT_EQ(back.size(), recs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    worst = std::max(worst, frobenius_distance(back[i].rotation, recs[i].rotation));
    EXPECT_EQ(back[i].source_convention, recs[i].source_convention);
    EXPECT_EQ(back[i].bbox, recs[i].bbox);
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Json, EulerOnlyAndMatrixOnly) {
  const auto recs = parse_annotations_json(R"([
    {"image_id": "e", "euler_deg": {"pitch": 10, "yaw": 20, "roll": 30}, "convention": "WIKI_ZYX"},
    {"image_id": "m", "rotation": [1,0,0, 0,1,0, 0,0,1], "convention": "TDDFA_V2"}])");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_LE(oracle::max_abs_diff(recs[0].rotation.matrix(),
                                 oracle::wiki_zyx(oracle::rad(10), oracle::rad(20), oracle::rad(30))),
            1e-15);
  EXPECT_FALSE(recs[1].euler_cache.has_value());
  EXPECT_TRUE(parse_annotations_json("").empty());
  EXPECT_TRUE(parse_annotations_json(annotations_to_json({}).dump()).empty());
}

TEST(Json, Errors) {
  EXPECT_THROW(parse_annotations_json("{not json"), FormatError);
  try {
    parse_annotations_json(R"({"annotations": [
      {"image_id": "a", "rotation": [1,0,0,0,1,0,0,0,1], "convention": "W300LP"},
      {"image_id": "b", "rotation": [1,0,0,0,1,0,0,0,2], "convention": "W300LP"}]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.record(), std::optional<std::size_t>(1));
  }
  EXPECT_THROW(parse_annotations_json(R"([{"image_id": "a", "convention": "W300LP"}])"), FormatError);
  // A cache that disagrees with the matrix is rejected.
  EXPECT_THROW(parse_annotations_json(R"([{"image_id": "a", "rotation": [1,0,0,0,1,0,0,0,1],
                                           "euler_deg": {"pitch": 5, "yaw": 0, "roll": 0},
                                           "convention": "W300LP"}])"),
               ValidationError);
}

TEST(Files, SaveLoad) {
  const auto recs = random_records(20, 83);
  for (auto fmt : {AnnotationFormat::Json, AnnotationFormat::Csv}) {
    const auto path = scratch(fmt == AnnotationFormat::Json ? "a.json" : "a.csv").string();
    save_annotations(recs, path, fmt);
    const auto back = load_annotations(path, fmt);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i)
      EXPECT_LE(frobenius_distance(back[i].rotation, recs[i].rotation), fmt == AnnotationFormat::Json ? 1e-12 : 1e-9);
  }
  EXPECT_THROW(load_annotations(scratch("missing.json").string(), AnnotationFormat::Json), IoError);
  EXPECT_THROW(save_annotations(recs, "/nonexistent-dir/x.json", AnnotationFormat::Json), IoError);
  EXPECT_THROW(parse_format("xml"), InvalidInput);
}

TEST(Fixtures, LabelledPosesFile) {
  const auto recs = load_annotations(std::string(HEADPOSE_DATA_DIR) + "/labelled_poses.csv", AnnotationFormat::Csv);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1].image_id, "middle.jpg");
  EXPECT_NEAR(rad2deg(recs[1].euler_cache->yaw), -49.589, 1e-12);
}

}  // namespace
