// SPDX-License-Identifier: Apache-2.0
// Spherical range image projection and pseudo-RGB composition.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sripipe/lidar_frame.hpp"

namespace sripipe {

struct ProjectionConfig {
  int width = 2048;
  int height = 128;
  double elevation_max_deg = 22.5;
  double elevation_min_deg = -22.5;

  bool operator==(const ProjectionConfig&) const = default;
  void validate() const;
};

struct PixelHit {
  int row = 0;
  int col = 0;
  uint32_t range_mm = 0;

  bool operator==(const PixelHit&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Returns nullopt when the point is outside the vertical field of view or
// closer than half a millimeter.
std::optional<PixelHit> project_point(const Point3& p,
                                      const ProjectionConfig& cfg);

// Inverse mapping through the pixel center (col + 0.5, row + 0.5).
Point3 unproject_pixel(int row, int col, uint32_t range_mm,
                       const ProjectionConfig& cfg);

struct SriBuildResult {
  LidarFrame frame;
  std::size_t dropped = 0;
};

// On pixel collision the smaller range wins; at equal range the point that
// appears first in the input order wins.
SriBuildResult pointcloud_to_sri(std::span<const RawPoint> points,
                                 const ProjectionConfig& cfg);

enum class NormalizationMethod { minmax, percentile_clip, fixed_scale };

struct ChannelOrder {
  LidarChannel r = LidarChannel::reflectivity;
  LidarChannel g = LidarChannel::nir;
  LidarChannel b = LidarChannel::signal;

  bool operator==(const ChannelOrder&) const = default;
};

struct NormalizationConfig {
  NormalizationMethod method = NormalizationMethod::percentile_clip;
  double clip_low = 1.0;
  double clip_high = 99.0;
  double fixed_divisor = 256.0;
  ChannelOrder channel_order;

  bool operator==(const NormalizationConfig&) const = default;
  void validate() const;
};

struct PseudoRgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, 3 bytes per pixel

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
};

// mask[i] != 0 marks a valid pixel; holes map to 0 in the output.
std::vector<uint8_t> normalize_channel(std::span<const uint16_t> plane,
                                       std::span<const uint8_t> mask,
                                       const NormalizationConfig& cfg);

std::vector<uint8_t> valid_mask(const LidarFrame& frame);

PseudoRgbImage compose_pseudo_rgb(const LidarFrame& frame,
                                  const NormalizationConfig& cfg);

const char* method_name(NormalizationMethod method);
NormalizationMethod method_from_name(const std::string& name);

}  // namespace sripipe
