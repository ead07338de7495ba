// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sripipe/errors.hpp"
#include "sripipe/tracker.hpp"

using namespace sripipe;

namespace {

Detection det_at(double x, double y, double score, double w = 60,
                 double h = 40, int class_id = 0) {
  Detection det;
  det.frame_id = "f";
  det.class_id = class_id;
  det.score = score;
  det.bbox = BBox{x, y, w, h};
  return det;
}

}  // namespace

TEST_CASE("high-score detections spawn tracks that confirm next frame") {
  Tracker tracker{TrackerConfig{}};
  const std::vector<Detection> dets = {det_at(100, 20, 0.9),
                                       det_at(800, 50, 0.9)};

  const auto first = tracker.step(dets);
  CHECK(first.empty());  // newborn tracks are tentative
  REQUIRE(tracker.tracks().size() == 2);
  CHECK(tracker.tracks()[0].id == 1);
  CHECK(tracker.tracks()[1].id == 2);
  CHECK(tracker.tracks()[0].status == TrackStatus::tentative);

  const auto second = tracker.step(dets);
  REQUIRE(second.size() == 2);
  CHECK(second[0].id == 1);
  CHECK(second[1].id == 2);
  CHECK(second[0].status == TrackStatus::confirmed);
  CHECK(second[0].score == 0.9);
}

TEST_CASE("a 0.72 detection never starts a track") {
  Tracker tracker{TrackerConfig{}};
  for (int frame = 0; frame < 100; ++frame) {
    const auto out = tracker.step({det_at(100, 20, 0.72)});
    CHECK(out.empty());
    CHECK(tracker.tracks().empty());
  }
}

TEST_CASE("a 0.75 detection does start a track") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.75)});
  CHECK(tracker.tracks().size() == 1);
}

TEST_CASE("a starved track is removed when the buffer is exceeded") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9)});
  tracker.step({det_at(100, 20, 0.9)});
  REQUIRE(tracker.tracks().size() == 1);
  CHECK(tracker.tracks()[0].status == TrackStatus::confirmed);

  // misses 1..20 leave the track lost but alive
  for (int miss = 1; miss <= 20; ++miss) {
    tracker.step({});
    REQUIRE(tracker.tracks().size() == 1);
    CHECK(tracker.tracks()[0].status == TrackStatus::lost);
    CHECK(tracker.tracks()[0].frames_since_update == miss);
    CHECK(tracker.removed_ids().empty());
  }
  // the 21st miss crosses the buffer of 20
  tracker.step({});
  CHECK(tracker.tracks().empty());
  CHECK(tracker.removed_ids() == std::vector<int>{1});
}

TEST_CASE("identical detections keep their ids every frame") {
  Tracker tracker{TrackerConfig{}};
  const std::vector<Detection> dets = {det_at(100, 20, 0.9),
                                       det_at(500, 30, 0.85),
                                       det_at(1200, 60, 0.95)};
  tracker.step(dets);
  for (int frame = 0; frame < 50; ++frame) {
    const auto out = tracker.step(dets);
    REQUIRE(out.size() == 3);
    CHECK(out[0].id == 1);
    CHECK(out[1].id == 2);
    CHECK(out[2].id == 3);
    // each id stays glued to its own object
    CHECK(std::fabs(out[0].bbox.cx() - 130.0) < 1.0);
    CHECK(std::fabs(out[1].bbox.cx() - 530.0) < 1.0);
    CHECK(std::fabs(out[2].bbox.cx() - 1230.0) < 1.0);
  }
}

TEST_CASE("moving objects keep their ids without switches") {
  Tracker tracker{TrackerConfig{}};
  std::set<int> seen_ids;
  for (int frame = 0; frame < 80; ++frame) {
    const double dx = 2.0 * frame;
    const auto out = tracker.step({det_at(100 + dx, 20, 0.9),
                                   det_at(900 - dx, 60, 0.9)});
    for (const auto& track : out) seen_ids.insert(track.id);
  }
  CHECK(seen_ids == std::set<int>{1, 2});
}

TEST_CASE("a low-score detection keeps a confirmed track alive") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9)});
  tracker.step({det_at(100, 20, 0.9)});

  for (int frame = 0; frame < 30; ++frame) {
    const auto out = tracker.step({det_at(100, 20, 0.4)});
    REQUIRE(out.size() == 1);
    CHECK(out[0].id == 1);
    CHECK(out[0].status == TrackStatus::confirmed);
    CHECK(out[0].score == 0.4);
  }
  CHECK(tracker.tracks()[0].frames_since_update == 0);
}

TEST_CASE("low-score detections never spawn tracks") {
  Tracker tracker{TrackerConfig{}};
  for (int frame = 0; frame < 10; ++frame) tracker.step({det_at(100, 20, 0.4)});
  CHECK(tracker.tracks().empty());
}

TEST_CASE("detections under the score floor are discarded entirely") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9)});
  tracker.step({det_at(100, 20, 0.9)});
  tracker.step({det_at(100, 20, 0.05)});
  REQUIRE(tracker.tracks().size() == 1);
  CHECK(tracker.tracks()[0].status == TrackStatus::lost);
  CHECK(tracker.tracks()[0].frames_since_update == 1);
}

TEST_CASE("a lost track regains its id when the object returns") {
  Tracker tracker{TrackerConfig{}};
  const std::vector<Detection> dets = {det_at(100, 20, 0.9)};
  tracker.step(dets);
  tracker.step(dets);
  for (int miss = 0; miss < 5; ++miss) {
    const auto out = tracker.step({});
    CHECK(out.empty());  // lost tracks are not reported
  }
  const auto out = tracker.step(dets);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == 1);
  CHECK(tracker.tracks().size() == 1);
}

TEST_CASE("ids are never reused after removal") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9)});
  for (int i = 0; i < 25; ++i) tracker.step({});
  CHECK(tracker.removed_ids() == std::vector<int>{1});

  tracker.step({det_at(100, 20, 0.9)});
  REQUIRE(tracker.tracks().size() == 1);
  CHECK(tracker.tracks()[0].id == 2);
}

TEST_CASE("two trackers fed the same stream agree exactly") {
  Tracker a{TrackerConfig{}};
  Tracker b{TrackerConfig{}};
  for (int frame = 0; frame < 40; ++frame) {
    const double dx = 1.5 * frame;
    const std::vector<Detection> dets = {
        det_at(100 + dx, 20, 0.9), det_at(400, 60 + dx / 2, 0.8),
        det_at(900 - dx, 30, frame % 3 == 0 ? 0.5 : 0.85)};
    const auto out_a = a.step(dets);
    const auto out_b = b.step(dets);
    REQUIRE(out_a.size() == out_b.size());
    for (std::size_t i = 0; i < out_a.size(); ++i) {
      CHECK(out_a[i].id == out_b[i].id);
      CHECK(out_a[i].bbox == out_b[i].bbox);
      CHECK(out_a[i].score == out_b[i].score);
    }
  }
}

TEST_CASE("matched detections update the track class") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9, 60, 40, 2)});
  const auto out = tracker.step({det_at(100, 20, 0.9, 60, 40, 2)});
  REQUIRE(out.size() == 1);
  CHECK(out[0].class_id == 2);
}

TEST_CASE("seam-aware matching survives a wrapped representation") {
  TrackerConfig wrap_cfg;
  wrap_cfg.wrap_width = 2048;

  // box straddling the seam: x 2030, width 40 reaches past column 2048
  Tracker with_wrap{wrap_cfg};
  Tracker without{TrackerConfig{}};
  for (int frame = 0; frame < 10; ++frame) {
    with_wrap.step({det_at(2030, 20, 0.9, 40, 30)});
    without.step({det_at(2030, 20, 0.9, 40, 30)});
  }
  // the same physical box, shifted down by one full turn
  const std::vector<Detection> flipped = {det_at(2030 - 2048, 20, 0.9, 40, 30)};

  const auto matched = with_wrap.step(flipped);
  REQUIRE(matched.size() == 1);
  CHECK(matched[0].id == 1);
  CHECK(with_wrap.tracks().size() == 1);

  const auto unmatched = without.step(flipped);
  CHECK(unmatched.empty());  // the old track is lost, the new one tentative
  REQUIRE(without.tracks().size() == 2);
  CHECK(without.tracks()[0].status == TrackStatus::lost);
  CHECK(without.tracks()[1].status == TrackStatus::tentative);
  CHECK(without.tracks()[1].id == 2);
}

TEST_CASE("output is ordered by id and confirmed-only") {
  Tracker tracker{TrackerConfig{}};
  tracker.step({det_at(100, 20, 0.9), det_at(700, 20, 0.9)});
  tracker.step({det_at(100, 20, 0.9), det_at(700, 20, 0.9)});
  // drop the first object so track 1 goes lost, spawn a third
  tracker.step({det_at(700, 20, 0.9), det_at(1500, 20, 0.9)});
  const auto out = tracker.step({det_at(700, 20, 0.9), det_at(1500, 20, 0.9)});
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == 2);
  CHECK(out[1].id == 3);
  CHECK(tracker.tracks().size() == 3);  // track 1 still lost, within buffer
}

TEST_CASE("config validation rejects out-of-range settings") {
  TrackerConfig cfg;
  cfg.match_thresh = 1.5;
  CHECK_THROWS_AS(Tracker{cfg}, Error);

  cfg = TrackerConfig{};
  cfg.track_buffer = 0;
  CHECK_THROWS_AS(Tracker{cfg}, Error);

  cfg = TrackerConfig{};
  cfg.wrap_width = -5;
  CHECK_THROWS_AS(Tracker{cfg}, Error);

  cfg = TrackerConfig{};
  cfg.new_track_thresh = -0.1;
  CHECK_THROWS_AS(Tracker{cfg}, Error);
}

TEST_CASE("frame index advances per step") {
  Tracker tracker{TrackerConfig{}};
  CHECK(tracker.frame_index() == 0);
  tracker.step({});
  tracker.step({});
  CHECK(tracker.frame_index() == 2);
}
