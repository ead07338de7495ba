// SPDX-License-Identifier: Apache-2.0
#include "sripipe/annotations.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sripipe/errors.hpp"
#include "sripipe/rng.hpp"

namespace sripipe {

using json = nlohmann::ordered_json;

int ClassMap::id_for(const std::string& label) {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it != labels_.end()) return static_cast<int>(it - labels_.begin());
  labels_.push_back(label);
  return static_cast<int>(labels_.size()) - 1;
}

std::string ClassMap::label_for(int class_id) const {
  if (class_id >= 0 && class_id < static_cast<int>(labels_.size()))
    return labels_[static_cast<std::size_t>(class_id)];
  return "class" + std::to_string(class_id);
}

namespace {

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

BBox hull_of(const std::vector<Polygon>& polygons) {
  return bbox_of(std::span<const Polygon>(polygons));
}

}  // namespace

std::vector<InstanceAnnotation> parse_labelme(const std::filesystem::path& file,
                                              ClassMap& classes) {
  return parse_labelme_text(read_text_file(file), classes, file.string());
}

std::vector<InstanceAnnotation> parse_labelme_text(const std::string& text,
                                                   ClassMap& classes,
                                                   const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::parse, origin + ": " + e.what());
  }
  try {
    if (!doc.contains("imageWidth") || !doc.contains("imageHeight") ||
        !doc.contains("shapes"))
      fail(Errc::parse, origin + ": missing imageWidth/imageHeight/shapes");
    const double width = doc.at("imageWidth").get<double>();
    const double height = doc.at("imageHeight").get<double>();
    if (width <= 0 || height <= 0)
      fail(Errc::parse, origin + ": non-positive image dimensions");

    std::vector<InstanceAnnotation> instances;
    // group_id value to index in `instances`, in first-appearance order
    std::vector<std::pair<int64_t, std::size_t>> groups;
    for (const auto& shape : doc.at("shapes")) {
      const auto label = shape.at("label").get<std::string>();
      const auto& points = shape.at("points");
      if (points.size() < 3)
        fail(Errc::degenerate_polygon,
             origin + ": shape '" + label + "' has " +
                 std::to_string(points.size()) + " points, need at least 3");
      Polygon polygon;
      polygon.reserve(points.size());
      for (const auto& pt : points) {
        if (!pt.is_array() || pt.size() != 2)
          fail(Errc::parse, origin + ": point is not an [x, y] pair");
        polygon.push_back(Vertex{
            std::clamp(pt.at(0).get<double>(), 0.0, width),
            std::clamp(pt.at(1).get<double>(), 0.0, height)});
      }

      const auto& group = shape.at("group_id");
      if (group.is_null()) {
        InstanceAnnotation anno;
        anno.label = label;
        anno.class_id = classes.id_for(label);
        anno.polygons.push_back(std::move(polygon));
        instances.push_back(std::move(anno));
        continue;
      }
      const auto group_id = group.get<int64_t>();
      const auto it = std::find_if(
          groups.begin(), groups.end(),
          [group_id](const auto& g) { return g.first == group_id; });
      if (it == groups.end()) {
        InstanceAnnotation anno;
        anno.label = label;
        anno.class_id = classes.id_for(label);
        anno.polygons.push_back(std::move(polygon));
        groups.emplace_back(group_id, instances.size());
        instances.push_back(std::move(anno));
      } else {
        instances[it->second].polygons.push_back(std::move(polygon));
      }
    }
    for (auto& anno : instances) anno.bbox = hull_of(anno.polygons);
    return instances;
  } catch (const json::exception& e) {
    fail(Errc::parse, origin + ": " + e.what());
  }
}

namespace {

void append_normalized(std::string& out, double value, double extent) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), " %.6f",
                std::clamp(value / extent, 0.0, 1.0));
  out += buf;
}

void append_vertex(std::string& out, const Vertex& v, int width, int height) {
  append_normalized(out, v.x, static_cast<double>(width));
  append_normalized(out, v.y, static_cast<double>(height));
}

}  // namespace

std::string to_yolo_seg(std::span<const InstanceAnnotation> annos, int width,
                        int height) {
  if (width < 1 || height < 1)
    fail(Errc::config, "image dimensions must be positive");
  std::string out;
  for (const auto& anno : annos) {
    out += std::to_string(anno.class_id);
    if (anno.polygons.empty())
      fail(Errc::degenerate_polygon, "instance without polygons");
    for (const Vertex& v : anno.polygons[0]) append_vertex(out, v, width, height);
    // Bridge: each further polygon rides along as a closed ring; the
    // repeated first vertex marks where the decoder splits.
    for (std::size_t k = 1; k < anno.polygons.size(); ++k) {
      const Polygon& poly = anno.polygons[k];
      for (const Vertex& v : poly) append_vertex(out, v, width, height);
      append_vertex(out, poly[0], width, height);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<Polygon> split_bridged(std::vector<Vertex> seq,
                                   std::size_t line_no) {
  std::vector<Polygon> reversed;
  while (true) {
    if (seq.size() < 3)
      fail(Errc::parse, "line " + std::to_string(line_no) +
                            ": polygon with fewer than 3 vertices");
    const Vertex last = seq.back();
    std::size_t split = seq.size();
    for (std::size_t i = seq.size() - 1; i-- > 0;) {
      if (seq[i] == last) {
        split = i;
        break;
      }
    }
    if (split == seq.size()) {
      reversed.emplace_back(std::move(seq));
      break;
    }
    Polygon ring(seq.begin() + static_cast<long>(split), seq.end() - 1);
    if (ring.size() < 3)
      fail(Errc::parse, "line " + std::to_string(line_no) +
                            ": bridged ring with fewer than 3 vertices");
    reversed.push_back(std::move(ring));
    seq.erase(seq.begin() + static_cast<long>(split), seq.end());
  }
  std::reverse(reversed.begin(), reversed.end());
  return reversed;
}

}  // namespace

std::vector<InstanceAnnotation> parse_yolo_seg(const std::string& text,
                                               int width, int height,
                                               const ClassMap& classes) {
  if (width < 1 || height < 1)
    fail(Errc::config, "image dimensions must be positive");
  std::vector<InstanceAnnotation> annos;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;  // blank line

    InstanceAnnotation anno;
    try {
      std::size_t used = 0;
      anno.class_id = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      fail(Errc::parse, "line " + std::to_string(line_no) +
                            ": bad class id '" + token + "'");
    }
    if (anno.class_id < 0)
      fail(Errc::parse,
           "line " + std::to_string(line_no) + ": negative class id");
    anno.label = classes.label_for(anno.class_id);

    std::vector<double> coords;
    while (fields >> token) {
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        fail(Errc::parse, "line " + std::to_string(line_no) +
                              ": bad coordinate '" + token + "'");
      }
      if (value < 0.0 || value > 1.0)
        fail(Errc::parse, "line " + std::to_string(line_no) +
                              ": coordinate " + token + " outside [0, 1]");
      coords.push_back(value);
    }
    if (coords.size() % 2 != 0)
      fail(Errc::parse,
           "line " + std::to_string(line_no) + ": odd coordinate count");

    std::vector<Vertex> seq;
    seq.reserve(coords.size() / 2);
    for (std::size_t i = 0; i < coords.size(); i += 2)
      seq.push_back(Vertex{coords[i], coords[i + 1]});
    anno.polygons = split_bridged(std::move(seq), line_no);
    for (Polygon& poly : anno.polygons)
      for (Vertex& v : poly) {
        v.x *= static_cast<double>(width);
        v.y *= static_cast<double>(height);
      }
    anno.bbox = hull_of(anno.polygons);
    annos.push_back(std::move(anno));
  }
  return annos;
}

std::string to_labelme_json(std::span<const InstanceAnnotation> annos,
                            int width, int height,
                            const std::string& image_path) {
  json doc;
  doc["version"] = "5.2.1";
  doc["flags"] = json::object();
  json shapes = json::array();
  int next_group = 1;
  for (const auto& anno : annos) {
    const bool grouped = anno.polygons.size() > 1;
    const int group_id = grouped ? next_group++ : 0;
    for (const Polygon& poly : anno.polygons) {
      json shape;
      shape["label"] = anno.label;
      json points = json::array();
      for (const Vertex& v : poly) points.push_back({v.x, v.y});
      shape["points"] = std::move(points);
      if (grouped)
        shape["group_id"] = group_id;
      else
        shape["group_id"] = nullptr;
      shape["shape_type"] = "polygon";
      shape["flags"] = json::object();
      shapes.push_back(std::move(shape));
    }
  }
  doc["shapes"] = std::move(shapes);
  doc["imagePath"] = image_path;
  doc["imageData"] = nullptr;
  doc["imageHeight"] = height;
  doc["imageWidth"] = width;
  return doc.dump(2) + "\n";
}

DatasetSplit split_dataset(std::span<const std::string> ids,
                           const SplitRatios& ratios, uint64_t seed) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      ratios.train + ratios.val + ratios.test != 100)
    fail(Errc::bad_ratios, "ratios must be non-negative and sum to 100, got " +
                               std::to_string(ratios.train) + "/" +
                               std::to_string(ratios.val) + "/" +
                               std::to_string(ratios.test));
  std::vector<std::string> shuffled(ids.begin(), ids.end());
  Xoshiro256ss rng(seed);
  deterministic_shuffle(shuffled, rng);

  const std::size_t n = shuffled.size();
  const std::size_t n_val = n * static_cast<std::size_t>(ratios.val) / 100;
  const std::size_t n_test = n * static_cast<std::size_t>(ratios.test) / 100;
  const std::size_t n_train = n - n_val - n_test;  // floor share + remainder

  DatasetSplit split;
  split.train.assign(shuffled.begin(),
                     shuffled.begin() + static_cast<long>(n_train));
  split.val.assign(shuffled.begin() + static_cast<long>(n_train),
                   shuffled.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(shuffled.begin() + static_cast<long>(n_train + n_val),
                    shuffled.end());
  return split;
}

std::vector<SplitStatsRow> dataset_stats(
    const DatasetSplit& split,
    const std::map<std::string, std::vector<InstanceAnnotation>>& annos) {
  const std::pair<const char*, const std::vector<std::string>*> sets[] = {
      {"train", &split.train}, {"val", &split.val}, {"test", &split.test}};
  std::vector<SplitStatsRow> rows;
  for (const auto& [name, ids] : sets) {
    SplitStatsRow row;
    row.set = name;
    row.images = ids->size();
    for (const std::string& id : *ids) {
      const auto it = annos.find(id);
      if (it == annos.end())
        fail(Errc::unknown_id, "no annotations entry for frame '" + id + "'");
      row.instances += it->second.size();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_split_table(std::span<const SplitStatsRow> rows) {
  std::string out = "Set   | Images | Instances\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-5s | %6zu | %9zu\n", row.set.c_str(),
                  row.images, row.instances);
    out += buf;
  }
  return out;
}

std::string serialize_split_manifest(const DatasetSplit& split) {
  json doc;
  doc["train"] = split.train;
  doc["val"] = split.val;
  doc["test"] = split.test;
  return doc.dump(2) + "\n";
}

DatasetSplit parse_split_manifest(const std::string& text) {
  try {
    const json doc = json::parse(text);
    DatasetSplit split;
    split.train = doc.at("train").get<std::vector<std::string>>();
    split.val = doc.at("val").get<std::vector<std::string>>();
    split.test = doc.at("test").get<std::vector<std::string>>();
    return split;
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("split manifest: ") + e.what());
  }
}

void write_split_manifest(const std::filesystem::path& file,
                          const DatasetSplit& split) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + file.string());
  out << serialize_split_manifest(split);
  if (!out) fail(Errc::io, "failed writing " + file.string());
}

DatasetSplit read_split_manifest(const std::filesystem::path& file) {
  return parse_split_manifest(read_text_file(file));
}

}  // namespace sripipe
