// SPDX-License-Identifier: Apache-2.0
// Python bindings for the core pipeline operations.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <tuple>
#include <vector>

#include "sripipe/annotations.hpp"
#include "sripipe/detections.hpp"
#include "sripipe/errors.hpp"
#include "sripipe/evaluation.hpp"
#include "sripipe/image_io.hpp"
#include "sripipe/lidar_frame.hpp"
#include "sripipe/sri_projection.hpp"
#include "sripipe/tracker.hpp"

namespace py = pybind11;
using namespace sripipe;

namespace {

py::list mask_to_python(const std::vector<Polygon>& mask) {
  py::list out;
  for (const Polygon& poly : mask) {
    py::list points;
    for (const Vertex& v : poly) points.append(py::make_tuple(v.x, v.y));
    out.append(points);
  }
  return out;
}

std::vector<Polygon> mask_from_python(
    const std::vector<std::vector<std::pair<double, double>>>& polys) {
  std::vector<Polygon> mask;
  for (const auto& poly : polys) {
    Polygon p;
    for (const auto& [x, y] : poly) p.push_back({x, y});
    mask.push_back(std::move(p));
  }
  return mask;
}

GroundTruthMap load_labels_dir(const std::filesystem::path& labels_dir,
                               ClassMap& classes) {
  if (!std::filesystem::is_directory(labels_dir))
    fail(Errc::io, labels_dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(labels_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  GroundTruthMap gts;
  for (const auto& file : files)
    gts[file.stem().string()] = parse_labelme(file, classes);
  return gts;
}

py::dict report_to_dict(const EvalReport& report) {
  py::dict doc;
  doc["branch"] = report.branch == EvalKind::box ? "box" : "mask";
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  doc["ap50"] = report.ap50;
  doc["map50_95"] = report.map50_95;
  doc["ap_per_threshold"] = report.ap_per_threshold;
  doc["no_ground_truth"] = report.no_ground_truth;
  py::list classes;
  for (const ClassReport& cls : report.per_class) {
    py::dict entry;
    entry["class_id"] = cls.class_id;
    entry["label"] = cls.label;
    entry["precision"] = cls.precision;
    entry["recall"] = cls.recall;
    entry["ap50"] = cls.ap50;
    entry["map50_95"] = cls.map50_95;
    entry["n_gt"] = cls.n_gt;
    entry["n_det"] = cls.n_det;
    classes.append(entry);
  }
  doc["per_class"] = classes;
  return doc;
}

}  // namespace

PYBIND11_MODULE(_sripipe, m) {
  m.doc() = "LiDAR spherical range image pipeline";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "Error");

  py::class_<ProjectionConfig>(m, "ProjectionConfig")
      .def(py::init([](int width, int height, double elevation_max_deg,
                       double elevation_min_deg) {
             ProjectionConfig cfg;
             cfg.width = width;
             cfg.height = height;
             cfg.elevation_max_deg = elevation_max_deg;
             cfg.elevation_min_deg = elevation_min_deg;
             cfg.validate();
             return cfg;
           }),
           py::arg("width") = ProjectionConfig{}.width,
           py::arg("height") = ProjectionConfig{}.height,
           py::arg("elevation_max_deg") = ProjectionConfig{}.elevation_max_deg,
           py::arg("elevation_min_deg") = ProjectionConfig{}.elevation_min_deg)
      .def_readwrite("width", &ProjectionConfig::width)
      .def_readwrite("height", &ProjectionConfig::height)
      .def_readwrite("elevation_max_deg", &ProjectionConfig::elevation_max_deg)
      .def_readwrite("elevation_min_deg", &ProjectionConfig::elevation_min_deg)
      .def("__repr__", [](const ProjectionConfig& cfg) {
        return "ProjectionConfig(width=" + std::to_string(cfg.width) +
               ", height=" + std::to_string(cfg.height) + ")";
      });

  py::class_<BBox>(m, "BBox")
      .def(py::init<double, double, double, double>(), py::arg("x"),
           py::arg("y"), py::arg("w"), py::arg("h"))
      .def_readwrite("x", &BBox::x)
      .def_readwrite("y", &BBox::y)
      .def_readwrite("w", &BBox::w)
      .def_readwrite("h", &BBox::h)
      .def_property_readonly("cx", &BBox::cx)
      .def_property_readonly("cy", &BBox::cy)
      .def("__repr__", [](const BBox& b) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "BBox(x=%g, y=%g, w=%g, h=%g)", b.x,
                      b.y, b.w, b.h);
        return std::string(buf);
      });

  m.def("box_iou",
        py::overload_cast<const BBox&, const BBox&, std::optional<int>>(
            &box_iou),
        py::arg("a"), py::arg("b"), py::arg("wrap_width") = std::nullopt);

  py::class_<Detection>(m, "Detection")
      .def(py::init([](std::string frame_id, int class_id, double score,
                       const BBox& bbox,
                       const std::vector<std::vector<std::pair<double, double>>>&
                           mask) {
             Detection det;
             det.frame_id = std::move(frame_id);
             det.class_id = class_id;
             det.score = score;
             det.bbox = bbox;
             det.mask = mask_from_python(mask);
             validate_detection(det);
             return det;
           }),
           py::arg("frame_id"), py::arg("class_id"), py::arg("score"),
           py::arg("bbox"),
           py::arg("mask") =
               std::vector<std::vector<std::pair<double, double>>>{})
      .def_readwrite("frame_id", &Detection::frame_id)
      .def_readwrite("class_id", &Detection::class_id)
      .def_readwrite("score", &Detection::score)
      .def_readwrite("bbox", &Detection::bbox)
      .def_property(
          "mask", [](const Detection& det) { return mask_to_python(det.mask); },
          [](Detection& det,
             const std::vector<std::vector<std::pair<double, double>>>& mask) {
            det.mask = mask_from_python(mask);
          });

  m.def(
      "serialize_detections",
      [](const std::vector<Detection>& dets) {
        DetectionMap by_frame;
        for (const Detection& det : dets) by_frame[det.frame_id].push_back(det);
        return serialize_detections(by_frame);
      },
      py::arg("detections"),
      "JSON-Lines text for a flat detection list, grouped by frame id.");

  py::enum_<TrackStatus>(m, "TrackStatus")
      .value("tentative", TrackStatus::tentative)
      .value("confirmed", TrackStatus::confirmed)
      .value("lost", TrackStatus::lost)
      .value("removed", TrackStatus::removed);

  py::class_<TrackerConfig>(m, "TrackerConfig")
      .def(py::init<>())
      .def_readwrite("assoc_thresh_first", &TrackerConfig::assoc_thresh_first)
      .def_readwrite("assoc_thresh_second", &TrackerConfig::assoc_thresh_second)
      .def_readwrite("new_track_thresh", &TrackerConfig::new_track_thresh)
      .def_readwrite("track_buffer", &TrackerConfig::track_buffer)
      .def_readwrite("match_thresh", &TrackerConfig::match_thresh)
      .def_readwrite("score_floor", &TrackerConfig::score_floor)
      .def_readwrite("wrap_width", &TrackerConfig::wrap_width);

  py::class_<TrackOutput>(m, "TrackOutput")
      .def_readonly("id", &TrackOutput::id)
      .def_readonly("bbox", &TrackOutput::bbox)
      .def_readonly("score", &TrackOutput::score)
      .def_readonly("status", &TrackOutput::status)
      .def_readonly("class_id", &TrackOutput::class_id)
      .def("__repr__", [](const TrackOutput& out) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "TrackOutput(id=%d, score=%.3f)",
                      out.id, out.score);
        return std::string(buf);
      });

  py::class_<Tracker>(m, "Tracker")
      .def(py::init<TrackerConfig>(), py::arg("config") = TrackerConfig{})
      .def("step", &Tracker::step, py::arg("detections"),
           "Advance one frame; returns confirmed tracks ordered by id.")
      .def_property_readonly("frame_index", &Tracker::frame_index)
      .def_property_readonly("removed_ids", &Tracker::removed_ids);

  m.def(
      "project_point",
      [](std::tuple<double, double, double> point, const ProjectionConfig& cfg)
          -> std::optional<std::tuple<int, int, uint32_t>> {
        const auto hit = project_point(
            Point3{std::get<0>(point), std::get<1>(point), std::get<2>(point)},
            cfg);
        if (!hit) return std::nullopt;
        return std::make_tuple(hit->row, hit->col, hit->range_mm);
      },
      py::arg("point"), py::arg("config") = ProjectionConfig{},
      "Map an (x, y, z) point in meters to (row, col, range_mm), or None "
      "when it falls outside the grid.");

  m.def(
      "unproject_pixel",
      [](int row, int col, uint32_t range_mm, const ProjectionConfig& cfg) {
        const Point3 p = unproject_pixel(row, col, range_mm, cfg);
        return std::make_tuple(p.x, p.y, p.z);
      },
      py::arg("row"), py::arg("col"), py::arg("range_mm"),
      py::arg("config") = ProjectionConfig{},
      "Ray through the pixel center scaled to range_mm, in meters.");

  m.def(
      "convert_points",
      [](const std::filesystem::path& csv, const std::filesystem::path& out_dir,
         const ProjectionConfig& cfg, uint32_t range_scale_mm) {
        const auto cloud = load_points(csv);
        const auto result = pointcloud_to_sri(cloud, cfg);
        save_frame(result.frame, out_dir, range_scale_mm);
        py::dict out;
        out["valid"] = result.frame.valid_count();
        out["dropped"] = result.dropped;
        return out;
      },
      py::arg("csv"), py::arg("out_dir"),
      py::arg("config") = ProjectionConfig{}, py::arg("range_scale_mm") = 4,
      "Project a point CSV into a four-plane frame directory.");

  m.def(
      "compose_frame",
      [](const std::filesystem::path& frame_dir,
         const std::filesystem::path& out_png, uint32_t range_scale_mm) {
        const auto frame = load_frame(frame_dir, range_scale_mm);
        const auto image = compose_pseudo_rgb(frame, NormalizationConfig{});
        if (out_png.has_parent_path())
          std::filesystem::create_directories(out_png.parent_path());
        write_png_rgb8(out_png, image.width, image.height, image.pixels);
        return std::make_tuple(image.width, image.height);
      },
      py::arg("frame_dir"), py::arg("out_png"), py::arg("range_scale_mm") = 4,
      "Compose the pseudo-RGB PNG for a frame directory; returns (w, h).");

  m.def(
      "split_dataset",
      [](const std::vector<std::string>& ids, std::tuple<int, int, int> ratios,
         uint64_t seed) {
        SplitRatios r;
        r.train = std::get<0>(ratios);
        r.val = std::get<1>(ratios);
        r.test = std::get<2>(ratios);
        const DatasetSplit split = split_dataset(ids, r, seed);
        return std::make_tuple(split.train, split.val, split.test);
      },
      py::arg("ids"), py::arg("ratios") = std::make_tuple(85, 10, 5),
      py::arg("seed") = 0,
      "Deterministic shuffle and split; returns (train, val, test) lists.");

  m.def(
      "labelme_to_yolo",
      [](const std::string& text, int width, int height) {
        ClassMap classes;
        const auto annos = parse_labelme_text(text, classes, "<python>");
        return to_yolo_seg(annos, width, height);
      },
      py::arg("labelme_json"), py::arg("width"), py::arg("height"),
      "Convert LabelMe JSON text to YOLO-seg lines (multi-polygon instances "
      "use the bridged encoding).");

  m.def(
      "yolo_to_labelme",
      [](const std::string& text, int width, int height,
         const std::string& image_path) {
        ClassMap classes;
        const auto annos = parse_yolo_seg(text, width, height, classes);
        return to_labelme_json(annos, width, height, image_path);
      },
      py::arg("yolo_text"), py::arg("width"), py::arg("height"),
      py::arg("image_path") = "frame.png",
      "Convert YOLO-seg lines back to LabelMe JSON text.");

  m.def(
      "evaluate_files",
      [](const std::filesystem::path& detections_file,
         const std::filesystem::path& labels_dir, const std::string& kind,
         bool wrap, int width, int height) {
        EvalKind branch;
        if (kind == "box")
          branch = EvalKind::box;
        else if (kind == "mask")
          branch = EvalKind::mask;
        else
          fail(Errc::usage, "kind must be box or mask");
        const auto dets = read_detections(detections_file);
        ClassMap classes;
        const auto gts = load_labels_dir(labels_dir, classes);
        const std::optional<int> wrap_width =
            wrap ? std::optional<int>(width) : std::nullopt;
        return report_to_dict(
            evaluate(dets, gts, branch, wrap_width, EvalDims{width, height}));
      },
      py::arg("detections_file"), py::arg("labels_dir"),
      py::arg("kind") = "box", py::arg("wrap") = false,
      py::arg("width") = 2048, py::arg("height") = 128,
      "Score a detections JSON-Lines file against a LabelMe directory.");
}
