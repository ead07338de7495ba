// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "sripipe/errors.hpp"
#include "sripipe/image_io.hpp"
#include "sripipe/lidar_frame.hpp"
#include "test_util.hpp"

using namespace sripipe;

namespace {

void write_plane(const std::filesystem::path& dir, const char* name, int w,
                 int h, uint16_t fill) {
  std::vector<uint16_t> pixels(static_cast<std::size_t>(w) * h, fill);
  write_png_gray16(dir / name, w, h, pixels);
}

ChannelStats sort_oracle(std::vector<double> values) {
  REQUIRE(!values.empty());
  std::sort(values.begin(), values.end());
  const auto nearest = [&](double pct) {
    auto rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
  };
  ChannelStats stats;
  stats.valid_count = values.size();
  stats.min = values.front();
  stats.max = values.back();
  stats.p01 = nearest(1.0);
  stats.p99 = nearest(99.0);
  return stats;
}

}  // namespace

TEST_CASE("constructor enforces plane sizes and dimensions") {
  std::vector<uint32_t> range(6, 0);
  std::vector<uint16_t> plane(6, 0);
  CHECK_NOTHROW(LidarFrame(3, 2, range, plane, plane, plane));
  CHECK_THROWS_AS(LidarFrame(0, 2, {}, {}, {}, {}), Error);
  CHECK_THROWS_AS(LidarFrame(3, 3, range, plane, plane, plane), Error);
  std::vector<uint16_t> short_plane(5, 0);
  CHECK_THROWS_AS(LidarFrame(3, 2, range, short_plane, plane, plane), Error);
}

TEST_CASE("load_frame reads four matching planes") {
  test_util::TempDir tmp;
  write_plane(tmp.path(), "range.png", 8, 4, 250);
  write_plane(tmp.path(), "reflect.png", 8, 4, 7);
  write_plane(tmp.path(), "nir.png", 8, 4, 9);
  write_plane(tmp.path(), "signal.png", 8, 4, 11);

  const LidarFrame frame = load_frame(tmp.path());
  CHECK(frame.width() == 8);
  CHECK(frame.height() == 4);
  CHECK(frame.range_mm()[0] == 1000);  // default scale: 4 mm per unit
  CHECK(frame.reflectivity()[0] == 7);
  CHECK(frame.valid_count() == 32);

  const LidarFrame scaled = load_frame(tmp.path(), 2);
  CHECK(scaled.range_mm()[0] == 500);
}

TEST_CASE("load_frame reports a missing channel") {
  test_util::TempDir tmp;
  write_plane(tmp.path(), "range.png", 4, 2, 1);
  write_plane(tmp.path(), "reflect.png", 4, 2, 1);
  write_plane(tmp.path(), "nir.png", 4, 2, 1);
  try {
    load_frame(tmp.path());
    FAIL("expected MissingChannel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_channel);
    CHECK(std::string(e.what()).find("signal.png") != std::string::npos);
  }
}

TEST_CASE("load_frame rejects disagreeing dimensions") {
  test_util::TempDir tmp;
  write_plane(tmp.path(), "range.png", 8, 4, 1);
  write_plane(tmp.path(), "reflect.png", 8, 4, 1);
  write_plane(tmp.path(), "nir.png", 4, 4, 1);
  write_plane(tmp.path(), "signal.png", 8, 4, 1);
  try {
    load_frame(tmp.path());
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("save then load round trips every plane") {
  test_util::TempDir tmp;
  const LidarFrame frame = test_util::make_ramp_frame(64, 16);
  save_frame(frame, tmp.path());
  const LidarFrame back = load_frame(tmp.path());
  CHECK(std::equal(back.range_mm().begin(), back.range_mm().end(),
                   frame.range_mm().begin(), frame.range_mm().end()));
  CHECK(std::equal(back.reflectivity().begin(), back.reflectivity().end(),
                   frame.reflectivity().begin(), frame.reflectivity().end()));
  CHECK(std::equal(back.nir().begin(), back.nir().end(), frame.nir().begin(),
                   frame.nir().end()));
  CHECK(std::equal(back.signal().begin(), back.signal().end(),
                   frame.signal().begin(), frame.signal().end()));
}

TEST_CASE("load_points parses rows in order and drops zero positions") {
  test_util::TempDir tmp;
  test_util::write_text(tmp / "pts.csv",
                        "x,y,z,reflectivity,nir,signal\n"
                        "1.5,0,0.25,10,20,30\n"
                        "0,0,0,10,10,10\n"
                        "-2,3,0,1,2,3\n");
  const auto points = load_points(tmp / "pts.csv");
  REQUIRE(points.size() == 2);
  CHECK(points[0].x == 1.5);
  CHECK(points[0].reflectivity == 10);
  CHECK(points[1].y == 3.0);
  CHECK(points[1].signal == 3);
}

TEST_CASE("load_points reports the failing row") {
  test_util::TempDir tmp;
  test_util::write_text(tmp / "pts.csv",
                        "x,y,z,reflectivity,nir,signal\n"
                        "1,0,0,1,1,1\n"
                        "oops,0,0,1,1,1\n");
  try {
    load_points(tmp / "pts.csv");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  test_util::write_text(tmp / "header.csv", "x,y,z\n1,0,0\n");
  CHECK_THROWS_AS(load_points(tmp / "header.csv"), Error);

  test_util::write_text(tmp / "fields.csv",
                        "x,y,z,reflectivity,nir,signal\n1,0,0,1,1\n");
  CHECK_THROWS_AS(load_points(tmp / "fields.csv"), Error);
}

TEST_CASE("channel_stats on a constant plane collapses to one value") {
  std::vector<uint32_t> range(12, 400);
  std::vector<uint16_t> reflect(12, 100), other(12, 5);
  const LidarFrame frame(4, 3, range, reflect, other, other);
  const ChannelStats stats = channel_stats(frame, LidarChannel::reflectivity);
  CHECK(stats.min == 100);
  CHECK(stats.max == 100);
  CHECK(stats.p01 == 100);
  CHECK(stats.p99 == 100);
  CHECK(stats.valid_count == 12);
}

TEST_CASE("channel_stats ignores holes and flags all-hole frames") {
  std::vector<uint32_t> range = {0, 500, 0, 900};
  std::vector<uint16_t> reflect = {7, 20, 9, 60}, other(4, 1);
  const LidarFrame frame(2, 2, range, reflect, other, other);
  const ChannelStats stats = channel_stats(frame, LidarChannel::reflectivity);
  CHECK(stats.min == 20);
  CHECK(stats.max == 60);
  CHECK(stats.valid_count == 2);

  std::vector<uint32_t> holes(4, 0);
  const LidarFrame empty(2, 2, holes, reflect, other, other);
  try {
    channel_stats(empty, LidarChannel::nir);
    FAIL("expected EmptyChannel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_channel);
  }
}

TEST_CASE("channel_stats matches a full-sort oracle and ignores pixel order") {
  std::mt19937 gen(42);
  std::uniform_int_distribution<int> value(0, 65535);
  std::uniform_int_distribution<int> coin(0, 4);

  for (int trial = 0; trial < 20; ++trial) {
    const int w = 37, h = 9;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<uint32_t> range(n);
    std::vector<uint16_t> reflect(n), other(n, 0);
    std::vector<double> valid_values;
    for (std::size_t i = 0; i < n; ++i) {
      range[i] = coin(gen) == 0 ? 0 : 1000;
      reflect[i] = static_cast<uint16_t>(value(gen));
      if (range[i] != 0) valid_values.push_back(reflect[i]);
    }
    if (valid_values.empty()) continue;
    const LidarFrame frame(w, h, range, reflect, other, other);
    const ChannelStats stats = channel_stats(frame, LidarChannel::reflectivity);
    const ChannelStats oracle = sort_oracle(valid_values);
    CHECK(stats.min == oracle.min);
    CHECK(stats.max == oracle.max);
    CHECK(stats.p01 == oracle.p01);
    CHECK(stats.p99 == oracle.p99);
    CHECK(stats.valid_count == oracle.valid_count);
    CHECK(stats.min <= stats.p01);
    CHECK(stats.p01 <= stats.p99);
    CHECK(stats.p99 <= stats.max);

    // permutation invariance: rotate the pixels and recompute
    std::vector<uint32_t> range_rot(range.begin() + 13, range.end());
    range_rot.insert(range_rot.end(), range.begin(), range.begin() + 13);
    std::vector<uint16_t> reflect_rot(reflect.begin() + 13, reflect.end());
    reflect_rot.insert(reflect_rot.end(), reflect.begin(), reflect.begin() + 13);
    const LidarFrame rotated(w, h, range_rot, reflect_rot, other, other);
    const ChannelStats rot_stats =
        channel_stats(rotated, LidarChannel::reflectivity);
    CHECK(rot_stats.min == stats.min);
    CHECK(rot_stats.max == stats.max);
    CHECK(rot_stats.p01 == stats.p01);
    CHECK(rot_stats.p99 == stats.p99);
  }
}

TEST_CASE("channel selector names round trip") {
  CHECK(channel_from_name("nir") == LidarChannel::nir);
  CHECK(channel_name(LidarChannel::signal) == std::string("signal"));
  CHECK_THROWS_AS(channel_from_name("bogus"), Error);
}
