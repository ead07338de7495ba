// SPDX-License-Identifier: Apache-2.0
// Pipeline configuration: one plain-text file holding every tunable default.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sripipe/sri_projection.hpp"
#include "sripipe/tracker.hpp"

namespace sripipe {

struct FrameConfig {
  uint32_t range_scale_mm = 4;  // millimeters per 16-bit range unit

  bool operator==(const FrameConfig&) const = default;
};

struct IoConfig {
  std::string frames_dir;
  std::string detections_file;
  std::string labels_dir;
  std::string output_dir;

  bool operator==(const IoConfig&) const = default;
};

struct TimingConfig {
  int warmup = 5;        // frame iterations dropped before measuring
  int repetitions = 100;  // passes over the frame sequence

  bool operator==(const TimingConfig&) const = default;
};

struct PipelineConfig {
  FrameConfig frame;
  ProjectionConfig projection;
  NormalizationConfig normalization;
  TrackerConfig tracker;
  IoConfig io;
  TimingConfig timing;

  bool operator==(const PipelineConfig&) const = default;
  void validate() const;
};

PipelineConfig parse_config_text(const std::string& text,
                                 const std::string& origin);
PipelineConfig load_config(const std::filesystem::path& file);
std::string serialize_config(const PipelineConfig& cfg);
void save_config(const std::filesystem::path& file, const PipelineConfig& cfg);

// Environment variable consulted when no --config flag is given.
inline constexpr const char* kConfigEnvVar = "SRIPIPE_CONFIG";

}  // namespace sripipe
