// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sripipe {

enum class LidarChannel { range, reflectivity, nir, signal };

/**
 * One structured LiDAR sweep: four aligned planes of the sensor's native 2D
 * images. range is stored in millimeters; a pixel with range 0 is a hole
 * (no return) and is excluded from every statistic.
 *
 * Immutable after construction; safe to share across threads.
 */
class LidarFrame {
 public:
  LidarFrame(int width, int height, std::vector<uint32_t> range_mm,
             std::vector<uint16_t> reflectivity, std::vector<uint16_t> nir,
             std::vector<uint16_t> signal);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::span<const uint32_t> range_mm() const { return range_mm_; }
  std::span<const uint16_t> reflectivity() const { return reflectivity_; }
  std::span<const uint16_t> nir() const { return nir_; }
  std::span<const uint16_t> signal() const { return signal_; }

  bool is_hole(std::size_t idx) const { return range_mm_[idx] == 0; }
  std::size_t valid_count() const;

 private:
  int width_;
  int height_;
  std::vector<uint32_t> range_mm_;
  std::vector<uint16_t> reflectivity_;
  std::vector<uint16_t> nir_;
  std::vector<uint16_t> signal_;
};

struct RawPoint {
  double x = 0.0;  // meters, sensor frame
  double y = 0.0;
  double z = 0.0;
  uint16_t reflectivity = 0;
  uint16_t nir = 0;
  uint16_t signal = 0;
};

struct ChannelStats {
  double min = 0.0;
  double max = 0.0;
  double p01 = 0.0;  // nearest-rank percentiles
  double p99 = 0.0;
  std::size_t valid_count = 0;
};

// Frame directory layout: range.png, reflect.png, nir.png, signal.png, each
// 16-bit single-channel grayscale of identical dimensions. The 16-bit range
// plane is scaled by range_scale_mm (default 4 mm per unit) into millimeters.
LidarFrame load_frame(const std::filesystem::path& dir,
                      uint32_t range_scale_mm = 4);
void save_frame(const LidarFrame& frame, const std::filesystem::path& dir,
                uint32_t range_scale_mm = 4);

// CSV with header x,y,z,reflectivity,nir,signal. Rows at the exact origin are
// dropped (no return). ParseError carries the 1-based line number.
std::vector<RawPoint> load_points(const std::filesystem::path& file);

// Statistics over non-hole pixels only; throws EmptyChannel for an all-hole
// frame. Percentiles are nearest-rank.
ChannelStats channel_stats(const LidarFrame& frame, LidarChannel channel);

const char* channel_name(LidarChannel channel);
LidarChannel channel_from_name(const std::string& name);

}  // namespace sripipe
