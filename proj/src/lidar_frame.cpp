// SPDX-License-Identifier: Apache-2.0
#include "sripipe/lidar_frame.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sripipe/errors.hpp"
#include "sripipe/image_io.hpp"

namespace sripipe {

namespace {

constexpr const char* kChannelFiles[] = {"range.png", "reflect.png", "nir.png",
                                         "signal.png"};

}  // namespace

LidarFrame::LidarFrame(int width, int height, std::vector<uint32_t> range_mm,
                       std::vector<uint16_t> reflectivity,
                       std::vector<uint16_t> nir, std::vector<uint16_t> signal)
    : width_(width),
      height_(height),
      range_mm_(std::move(range_mm)),
      reflectivity_(std::move(reflectivity)),
      nir_(std::move(nir)),
      signal_(std::move(signal)) {
  if (width_ < 1 || height_ < 1)
    fail(Errc::dimension_mismatch, "frame dimensions must be at least 1x1");
  const std::size_t n = pixel_count();
  if (range_mm_.size() != n || reflectivity_.size() != n || nir_.size() != n ||
      signal_.size() != n)
    fail(Errc::dimension_mismatch,
         "all four planes must hold width*height samples");
}

std::size_t LidarFrame::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(range_mm_.begin(), range_mm_.end(),
                    [](uint32_t r) { return r != 0; }));
}

LidarFrame load_frame(const std::filesystem::path& dir,
                      uint32_t range_scale_mm) {
  if (range_scale_mm == 0)
    fail(Errc::config, "range_scale_mm must be positive");
  Gray16Image planes[4];
  for (int i = 0; i < 4; ++i) {
    const auto path = dir / kChannelFiles[i];
    if (!std::filesystem::exists(path))
      fail(Errc::missing_channel, "missing " + path.string());
    planes[i] = read_png_gray16(path);
    if (planes[i].width != planes[0].width ||
        planes[i].height != planes[0].height)
      fail(Errc::dimension_mismatch,
           std::string(kChannelFiles[i]) + " is " +
               std::to_string(planes[i].width) + "x" +
               std::to_string(planes[i].height) + " but " + kChannelFiles[0] +
               " is " + std::to_string(planes[0].width) + "x" +
               std::to_string(planes[0].height) + " in " + dir.string());
  }
  std::vector<uint32_t> range(planes[0].pixels.size());
  for (std::size_t i = 0; i < range.size(); ++i)
    range[i] = static_cast<uint32_t>(planes[0].pixels[i]) * range_scale_mm;
  return LidarFrame(planes[0].width, planes[0].height, std::move(range),
                    std::move(planes[1].pixels), std::move(planes[2].pixels),
                    std::move(planes[3].pixels));
}

void save_frame(const LidarFrame& frame, const std::filesystem::path& dir,
                uint32_t range_scale_mm) {
  if (range_scale_mm == 0)
    fail(Errc::config, "range_scale_mm must be positive");
  std::filesystem::create_directories(dir);
  std::vector<uint16_t> range16(frame.pixel_count());
  for (std::size_t i = 0; i < range16.size(); ++i) {
    const uint32_t scaled = frame.range_mm()[i] / range_scale_mm;
    range16[i] = static_cast<uint16_t>(std::min<uint32_t>(scaled, 0xffff));
  }
  write_png_gray16(dir / kChannelFiles[0], frame.width(), frame.height(),
                   range16);
  write_png_gray16(dir / kChannelFiles[1], frame.width(), frame.height(),
                   frame.reflectivity());
  write_png_gray16(dir / kChannelFiles[2], frame.width(), frame.height(),
                   frame.nir());
  write_png_gray16(dir / kChannelFiles[3], frame.width(), frame.height(),
                   frame.signal());
}

namespace {

double parse_double_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    fail(Errc::parse, "line " + std::to_string(line_no) +
                          ": not a number: '" + std::string(field) + "'");
  return value;
}

uint16_t parse_u16_field(std::string_view field, std::size_t line_no) {
  // channel columns may carry a decimal point; round to the raw unit
  const double value = parse_double_field(field, line_no);
  if (value < 0.0 || value > 65535.0)
    fail(Errc::parse, "line " + std::to_string(line_no) +
                          ": channel value out of u16 range: '" +
                          std::string(field) + "'");
  return static_cast<uint16_t>(std::llround(value));
}

}  // namespace

std::vector<RawPoint> load_points(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(Errc::io, "cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line))
    fail(Errc::parse, "empty file: " + file.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,z,reflectivity,nir,signal")
    fail(Errc::parse, "line 1: expected header x,y,z,reflectivity,nir,signal");

  std::vector<RawPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[6];
    for (int f = 0; f < 6; ++f) {
      const std::size_t comma = rest.find(',');
      if (f < 5) {
        if (comma == std::string_view::npos)
          fail(Errc::parse,
               "line " + std::to_string(line_no) + ": expected 6 fields");
        fields[f] = rest.substr(0, comma);
        rest.remove_prefix(comma + 1);
      } else {
        if (comma != std::string_view::npos)
          fail(Errc::parse,
               "line " + std::to_string(line_no) + ": expected 6 fields");
        fields[f] = rest;
      }
    }
    RawPoint p;
    p.x = parse_double_field(fields[0], line_no);
    p.y = parse_double_field(fields[1], line_no);
    p.z = parse_double_field(fields[2], line_no);
    p.reflectivity = parse_u16_field(fields[3], line_no);
    p.nir = parse_u16_field(fields[4], line_no);
    p.signal = parse_u16_field(fields[5], line_no);
    if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) continue;  // no return
    points.push_back(p);
  }
  return points;
}

namespace {

// k-th smallest (0-based) by selection; the tests check this against a
// full-sort oracle.
double kth_value(std::vector<double>& values, std::size_t k) {
  std::nth_element(values.begin(), values.begin() + static_cast<long>(k),
                   values.end());
  return values[k];
}

std::size_t nearest_rank_index(double pct, std::size_t n) {
  const auto rank =
      static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  return std::clamp<std::size_t>(rank, 1, n) - 1;
}

}  // namespace

ChannelStats channel_stats(const LidarFrame& frame, LidarChannel channel) {
  std::vector<double> values;
  values.reserve(frame.pixel_count());
  const auto range = frame.range_mm();
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    if (range[i] == 0) continue;
    switch (channel) {
      case LidarChannel::range: values.push_back(range[i]); break;
      case LidarChannel::reflectivity:
        values.push_back(frame.reflectivity()[i]);
        break;
      case LidarChannel::nir: values.push_back(frame.nir()[i]); break;
      case LidarChannel::signal: values.push_back(frame.signal()[i]); break;
    }
  }
  if (values.empty())
    fail(Errc::empty_channel, std::string("no valid pixels in channel ") +
                                  channel_name(channel));
  ChannelStats stats;
  stats.valid_count = values.size();
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());
  stats.p01 = kth_value(values, nearest_rank_index(1.0, values.size()));
  stats.p99 = kth_value(values, nearest_rank_index(99.0, values.size()));
  return stats;
}

const char* channel_name(LidarChannel channel) {
  switch (channel) {
    case LidarChannel::range: return "range";
    case LidarChannel::reflectivity: return "reflectivity";
    case LidarChannel::nir: return "nir";
    case LidarChannel::signal: return "signal";
  }
  return "unknown";
}

LidarChannel channel_from_name(const std::string& name) {
  if (name == "range") return LidarChannel::range;
  if (name == "reflectivity") return LidarChannel::reflectivity;
  if (name == "nir") return LidarChannel::nir;
  if (name == "signal") return LidarChannel::signal;
  fail(Errc::config, "unknown channel '" + name + "'");
}

}  // namespace sripipe
