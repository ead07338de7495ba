// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "sripipe/detections.hpp"
#include "sripipe/errors.hpp"
#include "test_util.hpp"

using namespace sripipe;

namespace {

Detection make_det(const std::string& frame, double score, double x = 10,
                   double y = 10) {
  Detection det;
  det.frame_id = frame;
  det.class_id = 0;
  det.score = score;
  det.bbox = BBox{x, y, 40, 20};
  return det;
}

const char* kSample =
    "{\"frame_id\":\"f2\",\"class_id\":0,\"score\":0.9,"
    "\"bbox\":[10.0,20.0,30.0,40.0]}\n"
    "{\"frame_id\":\"f1\",\"class_id\":1,\"score\":0.5,"
    "\"bbox\":[5.0,5.0,10.0,10.0],"
    "\"polygon\":[[5.0,5.0,15.0,5.0,15.0,15.0],[1.0,1.0,2.0,1.0,2.0,2.0]]}\n"
    "{\"frame_id\":\"f2\",\"class_id\":0,\"score\":0.8,"
    "\"bbox\":[50.0,60.0,30.0,40.0]}\n";

}  // namespace

TEST_CASE("detections group by frame and keep per-frame order") {
  const DetectionMap map = parse_detections(kSample, "mem");
  REQUIRE(map.size() == 2);
  REQUIRE(map.at("f2").size() == 2);
  CHECK(map.at("f2")[0].score == 0.9);
  CHECK(map.at("f2")[1].score == 0.8);
  CHECK(map.at("f2")[0].bbox == BBox{10, 20, 30, 40});
  CHECK(map.at("f2")[0].mask.empty());

  REQUIRE(map.at("f1").size() == 1);
  const Detection& det = map.at("f1")[0];
  CHECK(det.class_id == 1);
  REQUIRE(det.mask.size() == 2);
  REQUIRE(det.mask[0].size() == 3);
  CHECK(det.mask[0][1] == Vertex{15, 5});
  CHECK(det.mask[1][2] == Vertex{2, 2});
}

TEST_CASE("validation rejects bad scores, boxes, and polygons") {
  Detection det = make_det("f", 0.5);
  CHECK_NOTHROW(validate_detection(det));

  det.score = 1.5;
  try {
    validate_detection(det);
    FAIL("expected ScoreRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::score_range);
  }

  det = make_det("f", 0.5);
  det.bbox.w = -1;
  try {
    validate_detection(det);
    FAIL("expected BadBox");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_box);
  }

  det = make_det("f", 0.5);
  det.mask = {Polygon{{0, 0}, {1, 1}}};
  try {
    validate_detection(det);
    FAIL("expected DegeneratePolygon");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_polygon);
  }
}

TEST_CASE("parse errors carry the 1-based line number") {
  try {
    parse_detections(
        "{\"frame_id\":\"a\",\"class_id\":0,\"score\":0.5,"
        "\"bbox\":[0.0,0.0,1.0,1.0]}\n"
        "{broken\n",
        "dets.jsonl");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("dets.jsonl") != std::string::npos);
  }

  try {
    parse_detections(
        "{\"frame_id\":\"a\",\"class_id\":0,\"score\":7.0,"
        "\"bbox\":[0.0,0.0,1.0,1.0]}\n",
        "mem");
    FAIL("expected ScoreRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::score_range);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  // odd-length flat polygon list
  CHECK_THROWS_AS(parse_detections("{\"frame_id\":\"a\",\"class_id\":0,"
                                   "\"score\":0.5,\"bbox\":[0.0,0.0,1.0,1.0],"
                                   "\"polygon\":[[1.0,2.0,3.0]]}\n",
                                   "mem"),
                  Error);
  // bbox must have four numbers
  CHECK_THROWS_AS(parse_detections("{\"frame_id\":\"a\",\"class_id\":0,"
                                   "\"score\":0.5,\"bbox\":[0.0,0.0,1.0]}\n",
                                   "mem"),
                  Error);
}

TEST_CASE("blank lines are ignored") {
  const DetectionMap map = parse_detections(
      "\n{\"frame_id\":\"a\",\"class_id\":0,\"score\":0.5,"
      "\"bbox\":[0.0,0.0,1.0,1.0]}\n\n",
      "mem");
  CHECK(map.size() == 1);
}

TEST_CASE("serialize then parse is the identity") {
  const DetectionMap map = parse_detections(kSample, "mem");
  const std::string text = serialize_detections(map);
  const DetectionMap back = parse_detections(text, "mem");
  CHECK(back == map);
}

TEST_CASE("files round trip through the filesystem") {
  test_util::TempDir dir;
  const auto path = dir / "dets.jsonl";
  const DetectionMap map = parse_detections(kSample, "mem");
  write_detections(path, map);
  CHECK(read_detections(path) == map);
  CHECK_THROWS_AS(read_detections(dir / "absent.jsonl"), Error);
}

TEST_CASE("replay returns recorded frames and counts misses") {
  DetectionMap map;
  map["f1"] = {make_det("f1", 0.9), make_det("f1", 0.4, 100, 50)};
  FileReplayDetector detector(map);

  PseudoRgbImage image;
  const auto hit = detector.detect(image, "f1");
  CHECK(hit.size() == 2);
  CHECK(detector.missed_frames() == 0);

  const auto miss = detector.detect(image, "f9");
  CHECK(miss.empty());
  CHECK(detector.missed_frames() == 1);
  detector.detect(image, "f9");
  CHECK(detector.missed_frames() == 2);
  CHECK(detector.by_frame() == map);
}

TEST_CASE("stub detector rewrites frame ids") {
  StubDetector detector({make_det("template", 0.7)});
  PseudoRgbImage image;
  const auto out = detector.detect(image, "frame42");
  REQUIRE(out.size() == 1);
  CHECK(out[0].frame_id == "frame42");
  CHECK(out[0].score == 0.7);

  CHECK_THROWS_AS(StubDetector({make_det("t", 2.0)}), Error);
}
