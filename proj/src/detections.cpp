// SPDX-License-Identifier: Apache-2.0
#include "sripipe/detections.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sripipe/errors.hpp"

namespace sripipe {

using json = nlohmann::ordered_json;

void validate_detection(const Detection& det) {
  if (det.score < 0.0 || det.score > 1.0)
    fail(Errc::score_range,
         "score " + std::to_string(det.score) + " outside [0, 1]");
  if (!(det.bbox.w > 0.0) || !(det.bbox.h > 0.0))
    fail(Errc::bad_box, "bbox needs positive width and height, got " +
                            std::to_string(det.bbox.w) + "x" +
                            std::to_string(det.bbox.h));
  for (const Polygon& poly : det.mask)
    if (poly.size() < 3)
      fail(Errc::degenerate_polygon, "mask polygon with " +
                                         std::to_string(poly.size()) +
                                         " vertices, need at least 3");
}

namespace {

Detection detection_from_json(const json& obj, std::size_t line_no) {
  Detection det;
  try {
    det.frame_id = obj.at("frame_id").get<std::string>();
    det.class_id = obj.at("class_id").get<int>();
    det.score = obj.at("score").get<double>();
    const auto& box = obj.at("bbox");
    if (!box.is_array() || box.size() != 4)
      fail(Errc::parse,
           "line " + std::to_string(line_no) + ": bbox must be [x, y, w, h]");
    det.bbox = BBox{box.at(0).get<double>(), box.at(1).get<double>(),
                    box.at(2).get<double>(), box.at(3).get<double>()};
    if (obj.contains("polygon") && !obj.at("polygon").is_null()) {
      for (const auto& flat : obj.at("polygon")) {
        if (!flat.is_array() || flat.size() % 2 != 0)
          fail(Errc::parse, "line " + std::to_string(line_no) +
                                ": polygon needs an even coordinate list");
        Polygon poly;
        for (std::size_t i = 0; i < flat.size(); i += 2)
          poly.push_back(Vertex{flat.at(i).get<double>(),
                                flat.at(i + 1).get<double>()});
        det.mask.push_back(std::move(poly));
      }
    }
  } catch (const json::exception& e) {
    fail(Errc::parse, "line " + std::to_string(line_no) + ": " + e.what());
  }
  try {
    validate_detection(det);
  } catch (const Error& e) {
    fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
  }
  return det;
}

}  // namespace

DetectionMap parse_detections(const std::string& text,
                              const std::string& origin) {
  DetectionMap by_frame;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail(Errc::parse, origin + ": line " + std::to_string(line_no) + ": " +
                            e.what());
    }
    if (!obj.is_object())
      fail(Errc::parse, origin + ": line " + std::to_string(line_no) +
                            ": expected a JSON object");
    Detection det = detection_from_json(obj, line_no);
    by_frame[det.frame_id].push_back(std::move(det));
  }
  return by_frame;
}

DetectionMap read_detections(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_detections(buffer.str(), file.string());
}

std::string serialize_detections(const DetectionMap& by_frame) {
  std::string out;
  for (const auto& [frame_id, dets] : by_frame) {
    for (const Detection& det : dets) {
      json obj;
      obj["frame_id"] = det.frame_id;
      obj["class_id"] = det.class_id;
      obj["score"] = det.score;
      obj["bbox"] = {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h};
      if (!det.mask.empty()) {
        json polys = json::array();
        for (const Polygon& poly : det.mask) {
          json flat = json::array();
          for (const Vertex& v : poly) {
            flat.push_back(v.x);
            flat.push_back(v.y);
          }
          polys.push_back(std::move(flat));
        }
        obj["polygon"] = std::move(polys);
      }
      out += obj.dump();
      out += '\n';
    }
  }
  return out;
}

void write_detections(const std::filesystem::path& file,
                      const DetectionMap& by_frame) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + file.string());
  out << serialize_detections(by_frame);
  if (!out) fail(Errc::io, "failed writing " + file.string());
}

FileReplayDetector FileReplayDetector::from_file(
    const std::filesystem::path& file) {
  return FileReplayDetector(read_detections(file));
}

std::vector<Detection> FileReplayDetector::detect(const PseudoRgbImage&,
                                                  const std::string& frame_id) {
  const auto it = by_frame_.find(frame_id);
  if (it == by_frame_.end()) {
    ++missed_;
    return {};
  }
  return it->second;
}

StubDetector::StubDetector(std::vector<Detection> canned)
    : canned_(std::move(canned)) {
  for (const Detection& det : canned_) validate_detection(det);
}

std::vector<Detection> StubDetector::detect(const PseudoRgbImage&,
                                            const std::string& frame_id) {
  std::vector<Detection> out = canned_;
  for (Detection& det : out) det.frame_id = frame_id;
  return out;
}

}  // namespace sripipe
