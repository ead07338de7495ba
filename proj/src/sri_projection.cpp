// SPDX-License-Identifier: Apache-2.0
#include "sripipe/sri_projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sripipe/errors.hpp"

namespace sripipe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace

void ProjectionConfig::validate() const {
  if (width < 1 || height < 1)
    fail(Errc::config, "projection grid must be at least 1x1");
  if (!(elevation_max_deg > elevation_min_deg))
    fail(Errc::config, "elevation_max_deg must exceed elevation_min_deg");
}

std::optional<PixelHit> project_point(const Point3& p,
                                      const ProjectionConfig& cfg) {
  const double norm = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  const auto range_mm = static_cast<int64_t>(std::llround(norm * 1000.0));
  if (range_mm <= 0) return std::nullopt;

  const double elevation = std::asin(std::clamp(p.z / norm, -1.0, 1.0));
  const double el_max = deg_to_rad(cfg.elevation_max_deg);
  const double el_min = deg_to_rad(cfg.elevation_min_deg);
  const double row_f = (el_max - elevation) / (el_max - el_min) *
                       static_cast<double>(cfg.height);
  const auto row = static_cast<int64_t>(std::floor(row_f));
  if (row < 0 || row >= cfg.height) return std::nullopt;

  const double azimuth = std::atan2(p.y, p.x);
  const double turn = std::fmod(kPi - azimuth, kTwoPi) / kTwoPi;
  auto col = static_cast<int64_t>(
      std::floor(turn * static_cast<double>(cfg.width)));
  col = std::clamp<int64_t>(col, 0, cfg.width - 1);

  return PixelHit{static_cast<int>(row), static_cast<int>(col),
                  static_cast<uint32_t>(range_mm)};
}

Point3 unproject_pixel(int row, int col, uint32_t range_mm,
                       const ProjectionConfig& cfg) {
  if (row < 0 || row >= cfg.height || col < 0 || col >= cfg.width)
    fail(Errc::invalid_pixel, "pixel (" + std::to_string(row) + ", " +
                                  std::to_string(col) + ") outside " +
                                  std::to_string(cfg.width) + "x" +
                                  std::to_string(cfg.height) + " grid");
  if (range_mm == 0) fail(Errc::zero_range, "cannot unproject a hole pixel");

  const double azimuth =
      kPi - (static_cast<double>(col) + 0.5) / static_cast<double>(cfg.width) *
                kTwoPi;
  const double el_max = deg_to_rad(cfg.elevation_max_deg);
  const double el_min = deg_to_rad(cfg.elevation_min_deg);
  const double elevation = el_max - (static_cast<double>(row) + 0.5) /
                                        static_cast<double>(cfg.height) *
                                        (el_max - el_min);
  const double r = static_cast<double>(range_mm) / 1000.0;
  const double horizontal = r * std::cos(elevation);
  return Point3{horizontal * std::cos(azimuth), horizontal * std::sin(azimuth),
                r * std::sin(elevation)};
}

SriBuildResult pointcloud_to_sri(std::span<const RawPoint> points,
                                 const ProjectionConfig& cfg) {
  cfg.validate();
  const std::size_t n =
      static_cast<std::size_t>(cfg.width) * static_cast<std::size_t>(cfg.height);
  std::vector<uint32_t> range(n, 0);
  std::vector<uint16_t> reflectivity(n, 0), nir(n, 0), signal(n, 0);
  std::size_t dropped = 0;

  for (const RawPoint& p : points) {
    const auto hit = project_point(Point3{p.x, p.y, p.z}, cfg);
    if (!hit) {
      ++dropped;
      continue;
    }
    const std::size_t idx =
        static_cast<std::size_t>(hit->row) * static_cast<std::size_t>(cfg.width) +
        static_cast<std::size_t>(hit->col);
    if (range[idx] != 0 && range[idx] <= hit->range_mm) continue;
    range[idx] = hit->range_mm;
    reflectivity[idx] = p.reflectivity;
    nir[idx] = p.nir;
    signal[idx] = p.signal;
  }

  return SriBuildResult{LidarFrame(cfg.width, cfg.height, std::move(range),
                                   std::move(reflectivity), std::move(nir),
                                   std::move(signal)),
                        dropped};
}

void NormalizationConfig::validate() const {
  if (!(clip_low < clip_high))
    fail(Errc::config, "clip_low must be below clip_high");
  if (clip_low < 0.0 || clip_high > 100.0)
    fail(Errc::config, "clip percentiles must lie in [0, 100]");
  if (!(fixed_divisor > 0.0))
    fail(Errc::config, "fixed_divisor must be positive");
  const LidarChannel order[] = {channel_order.r, channel_order.g,
                                channel_order.b};
  for (LidarChannel c : order)
    if (c == LidarChannel::range)
      fail(Errc::config, "channel_order must draw from reflectivity/nir/signal");
  if (order[0] == order[1] || order[0] == order[2] || order[1] == order[2])
    fail(Errc::config, "channel_order entries must be distinct");
}

namespace {

// Exact nearest-rank percentile over u16 samples via a counting histogram.
// Avoids sorting a quarter-million values per channel per frame.
uint16_t histogram_percentile(const std::array<uint32_t, 65536>& counts,
                              std::size_t total, double pct) {
  auto rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(total)));
  rank = std::clamp<std::size_t>(rank, 1, total);
  std::size_t cum = 0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    cum += counts[v];
    if (cum >= rank) return static_cast<uint16_t>(v);
  }
  return 65535;
}

}  // namespace

std::vector<uint8_t> normalize_channel(std::span<const uint16_t> plane,
                                       std::span<const uint8_t> mask,
                                       const NormalizationConfig& cfg) {
  cfg.validate();
  if (plane.size() != mask.size())
    fail(Errc::dimension_mismatch, "plane and mask sizes differ");

  std::vector<uint8_t> out(plane.size(), 0);

  double lo = 0.0;
  double hi = 0.0;
  if (cfg.method == NormalizationMethod::minmax ||
      cfg.method == NormalizationMethod::percentile_clip) {
    std::array<uint32_t, 65536> counts{};
    std::size_t total = 0;
    for (std::size_t i = 0; i < plane.size(); ++i) {
      if (!mask[i]) continue;
      ++counts[plane[i]];
      ++total;
    }
    if (total == 0) return out;
    if (cfg.method == NormalizationMethod::minmax) {
      lo = histogram_percentile(counts, total, 0.0);
      hi = histogram_percentile(counts, total, 100.0);
    } else {
      lo = histogram_percentile(counts, total, cfg.clip_low);
      hi = histogram_percentile(counts, total, cfg.clip_high);
    }
  }

  // One table lookup per pixel; the table covers the whole u16 domain.
  std::vector<uint8_t> lut(65536);
  if (cfg.method == NormalizationMethod::fixed_scale) {
    for (std::size_t v = 0; v < lut.size(); ++v) {
      const double scaled =
          std::floor(static_cast<double>(v) / cfg.fixed_divisor);
      lut[v] = static_cast<uint8_t>(std::clamp(scaled, 0.0, 255.0));
    }
  } else if (hi <= lo) {
    std::fill(lut.begin(), lut.end(), 0);
  } else {
    // numerator and denominator are exact integers in double, so the single
    // division rounds once and lround sees the correctly rounded quotient
    for (std::size_t v = 0; v < lut.size(); ++v) {
      const double clipped = std::clamp(static_cast<double>(v), lo, hi);
      lut[v] =
          static_cast<uint8_t>(std::lround((clipped - lo) * 255.0 / (hi - lo)));
    }
  }

  for (std::size_t i = 0; i < plane.size(); ++i)
    if (mask[i]) out[i] = lut[plane[i]];
  return out;
}

std::vector<uint8_t> valid_mask(const LidarFrame& frame) {
  std::vector<uint8_t> mask(frame.pixel_count());
  const auto range = frame.range_mm();
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = range[i] != 0;
  return mask;
}

namespace {

std::span<const uint16_t> channel_plane(const LidarFrame& frame,
                                        LidarChannel channel) {
  switch (channel) {
    case LidarChannel::reflectivity: return frame.reflectivity();
    case LidarChannel::nir: return frame.nir();
    case LidarChannel::signal: return frame.signal();
    case LidarChannel::range: break;
  }
  fail(Errc::config, "range is not a composable channel");
}

}  // namespace

PseudoRgbImage compose_pseudo_rgb(const LidarFrame& frame,
                                  const NormalizationConfig& cfg) {
  const std::vector<uint8_t> mask = valid_mask(frame);
  const std::vector<uint8_t> r =
      normalize_channel(channel_plane(frame, cfg.channel_order.r), mask, cfg);
  const std::vector<uint8_t> g =
      normalize_channel(channel_plane(frame, cfg.channel_order.g), mask, cfg);
  const std::vector<uint8_t> b =
      normalize_channel(channel_plane(frame, cfg.channel_order.b), mask, cfg);

  PseudoRgbImage image;
  image.width = frame.width();
  image.height = frame.height();
  image.pixels.resize(frame.pixel_count() * 3);
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    image.pixels[3 * i] = r[i];
    image.pixels[3 * i + 1] = g[i];
    image.pixels[3 * i + 2] = b[i];
  }
  return image;
}

const char* method_name(NormalizationMethod method) {
  switch (method) {
    case NormalizationMethod::minmax: return "minmax";
    case NormalizationMethod::percentile_clip: return "percentile_clip";
    case NormalizationMethod::fixed_scale: return "fixed_scale";
  }
  return "unknown";
}

NormalizationMethod method_from_name(const std::string& name) {
  if (name == "minmax") return NormalizationMethod::minmax;
  if (name == "percentile_clip") return NormalizationMethod::percentile_clip;
  if (name == "fixed_scale") return NormalizationMethod::fixed_scale;
  fail(Errc::config, "unknown normalization method '" + name + "'");
}

}  // namespace sripipe
