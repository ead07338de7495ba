// SPDX-License-Identifier: Apache-2.0
#include "sripipe/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sripipe/errors.hpp"

namespace sripipe {

void PipelineConfig::validate() const {
  if (frame.range_scale_mm == 0)
    fail(Errc::config, "range_scale_mm must be positive");
  projection.validate();
  normalization.validate();
  tracker.validate();
  if (timing.warmup < 0) fail(Errc::config, "warmup must be non-negative");
  if (timing.repetitions < 1)
    fail(Errc::config, "repetitions must be at least 1");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_line(const std::string& origin, std::size_t line_no,
                           const std::string& what) {
  fail(Errc::config,
       origin + ": line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view value, const std::string& origin,
                    std::size_t line_no) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    bad_line(origin, line_no, "expected a number, got '" + std::string(value) +
                                  "'");
  return out;
}

int64_t parse_int(std::string_view value, const std::string& origin,
                  std::size_t line_no) {
  int64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    bad_line(origin, line_no,
             "expected an integer, got '" + std::string(value) + "'");
  return out;
}

ChannelOrder parse_channel_order(std::string_view value,
                                 const std::string& origin,
                                 std::size_t line_no) {
  LidarChannel channels[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = value.find(',', start);
    const bool last = i == 2;
    if (last != (comma == std::string_view::npos))
      bad_line(origin, line_no,
               "channel_order needs three comma-separated channels");
    const std::string_view token =
        trim(value.substr(start, last ? std::string_view::npos : comma - start));
    try {
      channels[i] = channel_from_name(std::string(token));
    } catch (const Error&) {
      bad_line(origin, line_no, "unknown channel '" + std::string(token) + "'");
    }
    start = comma + 1;
  }
  return ChannelOrder{channels[0], channels[1], channels[2]};
}

std::string double_to_string(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text,
                                 const std::string& origin) {
  PipelineConfig cfg;
  std::istringstream lines(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;

  while (std::getline(lines, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        bad_line(origin, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> kSections = {
          "frame", "projection", "normalization", "tracker", "io", "timing"};
      if (!kSections.count(section))
        bad_line(origin, line_no, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      bad_line(origin, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty())
      bad_line(origin, line_no, "key '" + key + "' outside any section");
    if (!seen.insert(section + "." + key).second)
      bad_line(origin, line_no, "duplicate key '" + key + "'");

    const auto as_double = [&] { return parse_double(value, origin, line_no); };
    const auto as_int = [&] { return parse_int(value, origin, line_no); };

    bool known = true;
    if (section == "frame") {
      if (key == "range_scale_mm") {
        const int64_t v = as_int();
        if (v < 1) bad_line(origin, line_no, "range_scale_mm must be positive");
        cfg.frame.range_scale_mm = static_cast<uint32_t>(v);
      } else {
        known = false;
      }
    } else if (section == "projection") {
      if (key == "width") cfg.projection.width = static_cast<int>(as_int());
      else if (key == "height") cfg.projection.height = static_cast<int>(as_int());
      else if (key == "elevation_max_deg") cfg.projection.elevation_max_deg = as_double();
      else if (key == "elevation_min_deg") cfg.projection.elevation_min_deg = as_double();
      else known = false;
    } else if (section == "normalization") {
      if (key == "method") {
        try {
          cfg.normalization.method = method_from_name(std::string(value));
        } catch (const Error& e) {
          bad_line(origin, line_no, e.what());
        }
      } else if (key == "clip_low") cfg.normalization.clip_low = as_double();
      else if (key == "clip_high") cfg.normalization.clip_high = as_double();
      else if (key == "fixed_divisor") cfg.normalization.fixed_divisor = as_double();
      else if (key == "channel_order")
        cfg.normalization.channel_order = parse_channel_order(value, origin, line_no);
      else known = false;
    } else if (section == "tracker") {
      if (key == "assoc_thresh_first") cfg.tracker.assoc_thresh_first = as_double();
      else if (key == "assoc_thresh_second") cfg.tracker.assoc_thresh_second = as_double();
      else if (key == "new_track_thresh") cfg.tracker.new_track_thresh = as_double();
      else if (key == "track_buffer") cfg.tracker.track_buffer = static_cast<int>(as_int());
      else if (key == "match_thresh") cfg.tracker.match_thresh = as_double();
      else if (key == "score_floor") cfg.tracker.score_floor = as_double();
      else if (key == "wrap_width") {
        const int64_t v = as_int();
        if (v < 0) bad_line(origin, line_no, "wrap_width must be 0 or positive");
        if (v == 0)
          cfg.tracker.wrap_width.reset();
        else
          cfg.tracker.wrap_width = static_cast<int>(v);
      } else known = false;
    } else if (section == "io") {
      if (key == "frames_dir") cfg.io.frames_dir = std::string(value);
      else if (key == "detections_file") cfg.io.detections_file = std::string(value);
      else if (key == "labels_dir") cfg.io.labels_dir = std::string(value);
      else if (key == "output_dir") cfg.io.output_dir = std::string(value);
      else known = false;
    } else if (section == "timing") {
      if (key == "warmup") cfg.timing.warmup = static_cast<int>(as_int());
      else if (key == "repetitions") cfg.timing.repetitions = static_cast<int>(as_int());
      else known = false;
    }
    if (!known)
      bad_line(origin, line_no,
               "unknown key '" + key + "' in section [" + section + "]");
  }

  try {
    cfg.validate();
  } catch (const Error& e) {
    fail(Errc::config, origin + ": " + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), file.string());
}

std::string serialize_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "[frame]\n";
  out << "range_scale_mm = " << cfg.frame.range_scale_mm << "\n";
  out << "\n[projection]\n";
  out << "width = " << cfg.projection.width << "\n";
  out << "height = " << cfg.projection.height << "\n";
  out << "elevation_max_deg = " << double_to_string(cfg.projection.elevation_max_deg) << "\n";
  out << "elevation_min_deg = " << double_to_string(cfg.projection.elevation_min_deg) << "\n";
  out << "\n[normalization]\n";
  out << "method = " << method_name(cfg.normalization.method) << "\n";
  out << "clip_low = " << double_to_string(cfg.normalization.clip_low) << "\n";
  out << "clip_high = " << double_to_string(cfg.normalization.clip_high) << "\n";
  out << "fixed_divisor = " << double_to_string(cfg.normalization.fixed_divisor) << "\n";
  out << "channel_order = " << channel_name(cfg.normalization.channel_order.r)
      << "," << channel_name(cfg.normalization.channel_order.g) << ","
      << channel_name(cfg.normalization.channel_order.b) << "\n";
  out << "\n[tracker]\n";
  out << "assoc_thresh_first = " << double_to_string(cfg.tracker.assoc_thresh_first) << "\n";
  out << "assoc_thresh_second = " << double_to_string(cfg.tracker.assoc_thresh_second) << "\n";
  out << "new_track_thresh = " << double_to_string(cfg.tracker.new_track_thresh) << "\n";
  out << "track_buffer = " << cfg.tracker.track_buffer << "\n";
  out << "match_thresh = " << double_to_string(cfg.tracker.match_thresh) << "\n";
  out << "score_floor = " << double_to_string(cfg.tracker.score_floor) << "\n";
  out << "wrap_width = " << cfg.tracker.wrap_width.value_or(0) << "\n";
  out << "\n[io]\n";
  out << "frames_dir = " << cfg.io.frames_dir << "\n";
  out << "detections_file = " << cfg.io.detections_file << "\n";
  out << "labels_dir = " << cfg.io.labels_dir << "\n";
  out << "output_dir = " << cfg.io.output_dir << "\n";
  out << "\n[timing]\n";
  out << "warmup = " << cfg.timing.warmup << "\n";
  out << "repetitions = " << cfg.timing.repetitions << "\n";
  return out.str();
}

void save_config(const std::filesystem::path& file, const PipelineConfig& cfg) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + file.string());
  out << serialize_config(cfg);
  if (!out) fail(Errc::io, "failed writing " + file.string());
}

}  // namespace sripipe
