// SPDX-License-Identifier: Apache-2.0
// Detection records, JSON-Lines replay, and the pluggable detector contract.
#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sripipe/geometry.hpp"
#include "sripipe/sri_projection.hpp"

namespace sripipe {

struct Detection {
  std::string frame_id;
  int class_id = 0;
  double score = 0.0;
  BBox bbox;
  std::vector<Polygon> mask;  // empty means no mask

  bool operator==(const Detection&) const = default;
};

// Throws ScoreRange, BadBox, or DegeneratePolygon.
void validate_detection(const Detection& det);

using DetectionMap = std::map<std::string, std::vector<Detection>>;

DetectionMap parse_detections(const std::string& text,
                              const std::string& origin);
DetectionMap read_detections(const std::filesystem::path& file);

std::string serialize_detections(const DetectionMap& by_frame);
void write_detections(const std::filesystem::path& file,
                      const DetectionMap& by_frame);

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const PseudoRgbImage& image,
                                        const std::string& frame_id) = 0;
};

// Replays detections recorded in a JSON-Lines file. Frames absent from the
// file yield an empty list and bump missed_frames().
class FileReplayDetector : public Detector {
 public:
  explicit FileReplayDetector(DetectionMap by_frame)
      : by_frame_(std::move(by_frame)) {}
  static FileReplayDetector from_file(const std::filesystem::path& file);

  std::vector<Detection> detect(const PseudoRgbImage& image,
                                const std::string& frame_id) override;
  std::size_t missed_frames() const { return missed_; }
  const DetectionMap& by_frame() const { return by_frame_; }

 private:
  DetectionMap by_frame_;
  std::size_t missed_ = 0;
};

// Emits the same configured detections for every frame, with frame_id
// rewritten to the queried frame.
class StubDetector : public Detector {
 public:
  explicit StubDetector(std::vector<Detection> canned);

  std::vector<Detection> detect(const PseudoRgbImage& image,
                                const std::string& frame_id) override;

 private:
  std::vector<Detection> canned_;
};

}  // namespace sripipe
