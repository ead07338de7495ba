// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sripipe/errors.hpp"
#include "sripipe/lidar_frame.hpp"
#include "sripipe/sri_projection.hpp"
#include "test_util.hpp"

using namespace sripipe;

namespace {

// reference that normalizes one value at a time with a pre-sorted copy
uint8_t scalar_minmax(uint16_t v, uint16_t lo, uint16_t hi) {
  if (hi <= lo) return 0;
  const double clipped = std::clamp<double>(v, lo, hi);
  return static_cast<uint8_t>(
      std::lround((clipped - lo) * 255.0 / (double(hi) - double(lo))));
}

uint16_t sorted_percentile(std::vector<uint16_t> vals, double pct) {
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return vals[rank - 1];
}

LidarFrame frame_with_channels(int w, int h, std::vector<uint16_t> reflect,
                               std::vector<uint16_t> nir,
                               std::vector<uint16_t> signal,
                               std::vector<uint32_t> range) {
  return LidarFrame(w, h, std::move(range), std::move(reflect),
                    std::move(nir), std::move(signal));
}

}  // namespace

TEST_CASE("minmax maps the extremes to 0 and 255") {
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::minmax;
  const std::vector<uint16_t> vals = {100, 200, 300, 400, 500};
  const std::vector<uint8_t> mask(5, 1);
  const auto out = normalize_channel(vals, mask, cfg);
  CHECK(out.front() == 0);
  CHECK(out.back() == 255);
  CHECK(out[2] == 128);  // lround(200 * 255 / 400) = lround(127.5)
}

TEST_CASE("a constant channel maps to zero everywhere") {
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::minmax;
  const std::vector<uint16_t> vals(64, 1234);
  const std::vector<uint8_t> mask(64, 1);
  const auto out = normalize_channel(vals, mask, cfg);
  CHECK(std::all_of(out.begin(), out.end(), [](uint8_t v) { return v == 0; }));
}

TEST_CASE("percentile clipping matches a sort-based reference") {
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::percentile_clip;
  std::mt19937 gen(21);
  std::uniform_int_distribution<int> value(0, 65535);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50 + trial * 37;
    std::vector<uint16_t> vals(n);
    std::vector<uint8_t> mask(n, 1);
    for (auto& v : vals) v = static_cast<uint16_t>(value(gen));

    const uint16_t lo = sorted_percentile(vals, cfg.clip_low);
    const uint16_t hi = sorted_percentile(vals, cfg.clip_high);
    const auto out = normalize_channel(vals, mask, cfg);
    REQUIRE(out.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out[i] == scalar_minmax(vals[i], lo, hi));
    }
  }
}

TEST_CASE("masked-out entries do not influence the percentiles") {
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::minmax;
  const std::vector<uint16_t> vals = {9999, 10, 20, 30, 0};
  const std::vector<uint8_t> mask = {0, 1, 1, 1, 0};
  const auto out = normalize_channel(vals, mask, cfg);
  CHECK(out[0] == 0);  // hole
  CHECK(out[1] == 0);  // min of the valid set
  CHECK(out[3] == 255);
  CHECK(out[4] == 0);
}

TEST_CASE("fixed scale divides and saturates") {
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::fixed_scale;
  cfg.fixed_divisor = 256.0;
  const std::vector<uint16_t> vals = {0, 255, 256, 511, 512, 65535};
  const std::vector<uint8_t> mask(6, 1);
  const auto out = normalize_channel(vals, mask, cfg);
  CHECK(out[0] == 0);
  CHECK(out[1] == 0);
  CHECK(out[2] == 1);
  CHECK(out[3] == 1);
  CHECK(out[4] == 2);
  CHECK(out[5] == 255);

  cfg.fixed_divisor = 1.0;
  const std::vector<uint16_t> big = {300, 40000};
  const std::vector<uint8_t> big_mask = {1, 1};
  const auto raw = normalize_channel(big, big_mask, cfg);
  CHECK(raw[0] == 255);
  CHECK(raw[1] == 255);
}

TEST_CASE("normalization is monotone on valid pixels") {
  std::mt19937 gen(33);
  std::uniform_int_distribution<int> value(0, 65535);
  const std::size_t n = 4096;
  std::vector<uint16_t> vals(n);
  std::vector<uint8_t> mask(n, 1);
  for (auto& v : vals) v = static_cast<uint16_t>(value(gen));

  for (auto method : {NormalizationMethod::minmax,
                      NormalizationMethod::percentile_clip,
                      NormalizationMethod::fixed_scale}) {
    NormalizationConfig cfg;
    cfg.method = method;
    const auto out = normalize_channel(vals, mask, cfg);
    for (std::size_t i = 1; i < n; ++i) {
      if (vals[i - 1] <= vals[i]) {
        CHECK(out[i - 1] <= out[i]);
      } else {
        CHECK(out[i - 1] >= out[i]);
      }
    }
  }
}

TEST_CASE("compose fills channels in the configured order") {
  auto frame = test_util::make_ramp_frame(32, 8);
  NormalizationConfig cfg;
  cfg.method = NormalizationMethod::minmax;

  const auto mask = valid_mask(frame);
  const auto r = normalize_channel(frame.reflectivity(), mask, cfg);
  const auto g = normalize_channel(frame.nir(), mask, cfg);
  const auto b = normalize_channel(frame.signal(), mask, cfg);

  const PseudoRgbImage img = compose_pseudo_rgb(frame, cfg);
  REQUIRE(img.width == 32);
  REQUIRE(img.height == 8);
  REQUIRE(img.pixels.size() == 32 * 8 * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    CHECK(img.pixels[3 * i + 0] == r[i]);
    CHECK(img.pixels[3 * i + 1] == g[i]);
    CHECK(img.pixels[3 * i + 2] == b[i]);
  }
}

TEST_CASE("swapping two channels swaps the output planes") {
  auto frame = test_util::make_ramp_frame(64, 4);
  NormalizationConfig cfg;
  const PseudoRgbImage base = compose_pseudo_rgb(frame, cfg);

  NormalizationConfig swapped = cfg;
  std::swap(swapped.channel_order.r, swapped.channel_order.b);
  const PseudoRgbImage flip = compose_pseudo_rgb(frame, swapped);
  for (std::size_t i = 0; i < base.pixel_count(); ++i) {
    CHECK(base.pixels[3 * i + 0] == flip.pixels[3 * i + 2]);
    CHECK(base.pixels[3 * i + 1] == flip.pixels[3 * i + 1]);
    CHECK(base.pixels[3 * i + 2] == flip.pixels[3 * i + 0]);
  }
}

TEST_CASE("holes render as black regardless of channel values") {
  std::vector<uint32_t> range = {1000, 0, 2000, 0};
  std::vector<uint16_t> reflect = {100, 60000, 300, 60000};
  std::vector<uint16_t> nir = {1, 60000, 3, 60000};
  std::vector<uint16_t> sig = {7, 60000, 9, 60000};
  const auto frame = frame_with_channels(2, 2, reflect, nir, sig, range);
  for (auto method : {NormalizationMethod::minmax,
                      NormalizationMethod::percentile_clip,
                      NormalizationMethod::fixed_scale}) {
    NormalizationConfig cfg;
    cfg.method = method;
    const PseudoRgbImage img = compose_pseudo_rgb(frame, cfg);
    for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
      CHECK(img.pixels[3 * i + 0] == 0);
      CHECK(img.pixels[3 * i + 1] == 0);
      CHECK(img.pixels[3 * i + 2] == 0);
    }
  }
}

TEST_CASE("an all-hole frame composes to a black image") {
  const auto frame = frame_with_channels(4, 2, std::vector<uint16_t>(8, 5),
                                         std::vector<uint16_t>(8, 6),
                                         std::vector<uint16_t>(8, 7),
                                         std::vector<uint32_t>(8, 0));
  const PseudoRgbImage img = compose_pseudo_rgb(frame, NormalizationConfig{});
  CHECK(std::all_of(img.pixels.begin(), img.pixels.end(),
                    [](uint8_t v) { return v == 0; }));
}

TEST_CASE("normalization config validation") {
  NormalizationConfig cfg;
  cfg.clip_low = 99.0;
  cfg.clip_high = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);

  cfg = NormalizationConfig{};
  cfg.fixed_divisor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);

  cfg = NormalizationConfig{};
  cfg.channel_order.g = cfg.channel_order.r;
  CHECK_THROWS_AS(cfg.validate(), Error);

  cfg = NormalizationConfig{};
  cfg.channel_order.b = LidarChannel::range;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("mask and channel length must agree") {
  CHECK_THROWS_AS(
      normalize_channel(std::vector<uint16_t>(4, 1),
                        std::vector<uint8_t>(3, 1), NormalizationConfig{}),
      Error);
}
