// SPDX-License-Identifier: Apache-2.0
// Instance annotations: LabelMe JSON, YOLO-seg text with the bridged
// multi-polygon encoding, and deterministic dataset splitting.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sripipe/geometry.hpp"

namespace sripipe {

struct InstanceAnnotation {
  std::string label;
  int class_id = 0;
  std::vector<Polygon> polygons;
  BBox bbox;  // tight hull of all polygon vertices
};

// Maps class labels to contiguous ids. "car" is preregistered as 0; other
// labels receive ids in order of first appearance.
class ClassMap {
 public:
  ClassMap() : labels_{"car"} {}

  int id_for(const std::string& label);
  std::string label_for(int class_id) const;
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

std::vector<InstanceAnnotation> parse_labelme(const std::filesystem::path& file,
                                              ClassMap& classes);
std::vector<InstanceAnnotation> parse_labelme_text(const std::string& text,
                                                   ClassMap& classes,
                                                   const std::string& origin);

std::string to_yolo_seg(std::span<const InstanceAnnotation> annos, int width,
                        int height);
std::vector<InstanceAnnotation> parse_yolo_seg(const std::string& text,
                                               int width, int height,
                                               const ClassMap& classes);

std::string to_labelme_json(std::span<const InstanceAnnotation> annos,
                            int width, int height,
                            const std::string& image_path);

struct SplitRatios {
  int train = 85;
  int val = 10;
  int test = 5;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  bool operator==(const DatasetSplit&) const = default;
};

DatasetSplit split_dataset(std::span<const std::string> ids,
                           const SplitRatios& ratios, uint64_t seed);

struct SplitStatsRow {
  std::string set;
  std::size_t images = 0;
  std::size_t instances = 0;

  bool operator==(const SplitStatsRow&) const = default;
};

std::vector<SplitStatsRow> dataset_stats(
    const DatasetSplit& split,
    const std::map<std::string, std::vector<InstanceAnnotation>>& annos);

std::string format_split_table(std::span<const SplitStatsRow> rows);

std::string serialize_split_manifest(const DatasetSplit& split);
DatasetSplit parse_split_manifest(const std::string& text);
void write_split_manifest(const std::filesystem::path& file,
                          const DatasetSplit& split);
DatasetSplit read_split_manifest(const std::filesystem::path& file);

}  // namespace sripipe
