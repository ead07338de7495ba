// SPDX-License-Identifier: Apache-2.0
// sripipe command line: convert, compose, split, labels, track, eval, bench.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sripipe/annotations.hpp"
#include "sripipe/config.hpp"
#include "sripipe/detections.hpp"
#include "sripipe/errors.hpp"
#include "sripipe/evaluation.hpp"
#include "sripipe/image_io.hpp"
#include "sripipe/lidar_frame.hpp"
#include "sripipe/pipeline.hpp"
#include "sripipe/sri_projection.hpp"
#include "sripipe/tracker.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

int exit_code_for(sripipe::ErrorClass category) {
  switch (category) {
    case sripipe::ErrorClass::usage: return 64;
    case sripipe::ErrorClass::data: return 65;
    case sripipe::ErrorClass::io: return 74;
  }
  return 70;
}

sripipe::PipelineConfig resolve_config(const std::string& config_flag) {
  if (!config_flag.empty()) return sripipe::load_config(config_flag);
  if (const char* env = std::getenv(sripipe::kConfigEnvVar); env && *env)
    return sripipe::load_config(env);
  return sripipe::PipelineConfig{};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) sripipe::fail(sripipe::Errc::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) sripipe::fail(sripipe::Errc::io, "cannot write " + path.string());
  out << text;
  if (!out) sripipe::fail(sripipe::Errc::io, "failed writing " + path.string());
}

std::vector<std::string> read_id_list(const fs::path& path) {
  std::istringstream lines(read_file(path));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

sripipe::SplitRatios parse_ratio_flag(const std::string& text) {
  sripipe::SplitRatios ratios;
  if (std::sscanf(text.c_str(), "%d,%d,%d", &ratios.train, &ratios.val,
                  &ratios.test) != 3)
    sripipe::fail(sripipe::Errc::usage,
                  "--ratios expects train,val,test integers, got '" + text +
                      "'");
  return ratios;
}

json report_to_json(const sripipe::EvalReport& report) {
  json doc;
  doc["branch"] = report.branch == sripipe::EvalKind::box ? "box" : "mask";
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  doc["ap50"] = report.ap50;
  doc["map50_95"] = report.map50_95;
  doc["ap_per_threshold"] = report.ap_per_threshold;
  doc["no_ground_truth"] = report.no_ground_truth;
  json classes = json::array();
  for (const auto& cls : report.per_class) {
    json entry;
    entry["class_id"] = cls.class_id;
    entry["label"] = cls.label;
    entry["precision"] = cls.precision;
    entry["recall"] = cls.recall;
    entry["ap50"] = cls.ap50;
    entry["map50_95"] = cls.map50_95;
    entry["n_gt"] = cls.n_gt;
    entry["n_det"] = cls.n_det;
    classes.push_back(std::move(entry));
  }
  doc["per_class"] = std::move(classes);
  return doc;
}

json timing_to_json(const sripipe::TimingReport& report) {
  json doc;
  doc["median_ms"] = {{"pre", report.median_pre},
                      {"inf", report.median_inf},
                      {"post", report.median_post},
                      {"total", report.median_total}};
  doc["p95_ms"] = {{"pre", report.p95_pre},
                   {"inf", report.p95_inf},
                   {"post", report.p95_post},
                   {"total", report.p95_total}};
  doc["samples"] = report.samples;
  doc["decomposition"] = report.decomposition();
  return doc;
}

sripipe::GroundTruthMap load_ground_truth(const fs::path& labels_dir,
                                          sripipe::ClassMap& classes) {
  if (!fs::is_directory(labels_dir))
    sripipe::fail(sripipe::Errc::io,
                  labels_dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(labels_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  sripipe::GroundTruthMap gts;
  for (const fs::path& file : files)
    gts[file.stem().string()] = sripipe::parse_labelme(file, classes);
  return gts;
}

int run_convert(const sripipe::PipelineConfig& cfg, const std::string& points,
                const std::string& out_dir) {
  const auto cloud = sripipe::load_points(points);
  auto result = sripipe::pointcloud_to_sri(cloud, cfg.projection);
  sripipe::save_frame(result.frame, out_dir, cfg.frame.range_scale_mm);
  std::fprintf(stderr, "sripipe: %zu points outside the grid dropped\n",
               result.dropped);
  std::printf("wrote %s (%dx%d, %zu valid pixels)\n", out_dir.c_str(),
              result.frame.width(), result.frame.height(),
              result.frame.valid_count());
  return 0;
}

int run_compose(const sripipe::PipelineConfig& cfg, const std::string& frame_dir,
                const std::string& out_png) {
  const auto frame = sripipe::load_frame(frame_dir, cfg.frame.range_scale_mm);
  const auto image = sripipe::compose_pseudo_rgb(frame, cfg.normalization);
  if (fs::path(out_png).has_parent_path())
    fs::create_directories(fs::path(out_png).parent_path());
  sripipe::write_png_rgb8(out_png, image.width, image.height, image.pixels);
  std::printf("wrote %s (%dx%d)\n", out_png.c_str(), image.width, image.height);
  return 0;
}

int run_split(const std::string& ids_file, const std::string& ratios_text,
              uint64_t seed, const std::string& out_file,
              const std::string& labels_dir) {
  const auto ids = read_id_list(ids_file);
  const auto ratios = parse_ratio_flag(ratios_text);
  const auto split = sripipe::split_dataset(ids, ratios, seed);
  sripipe::write_split_manifest(out_file, split);
  if (!labels_dir.empty()) {
    sripipe::ClassMap classes;
    const auto gts = load_ground_truth(labels_dir, classes);
    std::map<std::string, std::vector<sripipe::InstanceAnnotation>> annos;
    for (const std::string& id : ids) {
      const auto it = gts.find(id);
      annos[id] = it == gts.end() ? std::vector<sripipe::InstanceAnnotation>{}
                                  : it->second;
    }
    const auto rows = sripipe::dataset_stats(split, annos);
    std::fputs(sripipe::format_split_table(rows).c_str(), stdout);
  } else {
    std::printf("train %zu / val %zu / test %zu\n", split.train.size(),
                split.val.size(), split.test.size());
  }
  return 0;
}

int run_labels(const sripipe::PipelineConfig& cfg, const std::string& to,
               const std::string& in_dir, const std::string& out_dir) {
  if (to != "yolo" && to != "labelme")
    sripipe::fail(sripipe::Errc::usage, "--to must be yolo or labelme");
  if (!fs::is_directory(in_dir))
    sripipe::fail(sripipe::Errc::io, in_dir + " is not a directory");
  fs::create_directories(out_dir);
  const int width = cfg.projection.width;
  const int height = cfg.projection.height;
  sripipe::ClassMap classes;
  std::vector<fs::path> files;
  const std::string ext = to == "yolo" ? ".json" : ".txt";
  for (const auto& entry : fs::directory_iterator(in_dir))
    if (entry.is_regular_file() && entry.path().extension() == ext)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    if (to == "yolo") {
      const auto annos = sripipe::parse_labelme(file, classes);
      write_file(fs::path(out_dir) / (file.stem().string() + ".txt"),
                 sripipe::to_yolo_seg(annos, width, height));
    } else {
      const auto annos =
          sripipe::parse_yolo_seg(read_file(file), width, height, classes);
      write_file(fs::path(out_dir) / (file.stem().string() + ".json"),
                 sripipe::to_labelme_json(annos, width, height,
                                          file.stem().string() + ".png"));
    }
  }
  std::printf("converted %zu files to %s\n", files.size(), to.c_str());
  return 0;
}

int run_track(const sripipe::PipelineConfig& cfg, const std::string& frames_dir,
              const std::string& detections_file, const std::string& out_csv,
              const std::string& overlay_dir) {
  const auto frame_ids = sripipe::list_frame_ids(frames_dir);
  const auto detections = sripipe::read_detections(detections_file);
  const auto result =
      sripipe::run_tracking(frame_ids, detections, cfg.tracker);
  write_file(out_csv, result.mot_csv);
  if (result.missing_frames > 0)
    std::fprintf(stderr,
                 "sripipe: warning: %zu of %d frames had no detections entry\n",
                 result.missing_frames, result.frames);

  if (!overlay_dir.empty()) {
    // Second pass rebuilds tracker state frame by frame for the overlays.
    sripipe::Tracker tracker(cfg.tracker);
    fs::create_directories(overlay_dir);
    static const std::vector<sripipe::Detection> kNone;
    for (const std::string& id : frame_ids) {
      const auto frame =
          sripipe::load_frame(fs::path(frames_dir) / id, cfg.frame.range_scale_mm);
      auto image = sripipe::compose_pseudo_rgb(frame, cfg.normalization);
      const auto it = detections.find(id);
      const auto outputs =
          tracker.step(it == detections.end() ? kNone : it->second);
      sripipe::draw_track_overlay(image, outputs);
      sripipe::write_png_rgb8(fs::path(overlay_dir) / (id + ".png"),
                              image.width, image.height, image.pixels);
    }
  }
  std::printf("tracked %d frames -> %s\n", result.frames, out_csv.c_str());
  return 0;
}

int run_eval(const sripipe::PipelineConfig& cfg,
             const std::string& detections_file, const std::string& labels_dir,
             const std::string& kind_text, bool wrap,
             const std::string& json_out) {
  sripipe::EvalKind kind;
  if (kind_text == "box")
    kind = sripipe::EvalKind::box;
  else if (kind_text == "mask")
    kind = sripipe::EvalKind::mask;
  else
    sripipe::fail(sripipe::Errc::usage, "--kind must be box or mask");

  const auto detections = sripipe::read_detections(detections_file);
  sripipe::ClassMap classes;
  const auto gts = load_ground_truth(labels_dir, classes);
  const sripipe::EvalDims dims{cfg.projection.width, cfg.projection.height};
  const std::optional<int> wrap_width =
      wrap ? std::optional<int>(cfg.projection.width) : std::nullopt;
  const auto report = sripipe::evaluate(detections, gts, kind, wrap_width, dims);
  if (report.no_ground_truth)
    std::fprintf(stderr,
                 "sripipe: warning: no ground-truth instances; recall is "
                 "reported as 0\n");
  std::fputs(sripipe::format_eval_table(report).c_str(), stdout);
  if (!json_out.empty()) write_file(json_out, report_to_json(report).dump(2) + "\n");
  return 0;
}

int run_bench(const sripipe::PipelineConfig& cfg, const std::string& frames_dir,
              const std::string& detections_file, const std::string& json_out) {
  const auto frame_ids = sripipe::list_frame_ids(frames_dir);
  const auto detections = sripipe::read_detections(detections_file);
  const auto report =
      sripipe::bench_pipeline(frames_dir, frame_ids, detections, cfg);
  std::printf("pre+inf+post: %s ms (median over %zu frames)\n",
              report.decomposition().c_str(), report.samples);
  std::printf("median total: %.1f ms   p95 total: %.1f ms\n",
              report.median_total, report.p95_total);
  if (!json_out.empty()) write_file(json_out, timing_to_json(report).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR spherical range image pipeline"};
  app.require_subcommand(1);
  std::string config_flag;
  app.add_option("--config", config_flag,
                 "pipeline config file (overrides " +
                     std::string(sripipe::kConfigEnvVar) + ")");

  auto* convert = app.add_subcommand("convert", "project a point CSV into an SRI frame");
  std::string convert_points, convert_out;
  convert->add_option("--points", convert_points, "input CSV")->required();
  convert->add_option("--out", convert_out, "output frame directory")->required();

  auto* compose = app.add_subcommand("compose", "compose a pseudo-RGB PNG from a frame");
  std::string compose_frame, compose_out;
  compose->add_option("--frame", compose_frame, "frame directory")->required();
  compose->add_option("--out", compose_out, "output PNG")->required();

  auto* split = app.add_subcommand("split", "write a train/val/test manifest");
  std::string split_ids, split_ratios = "85,10,5", split_out = "split.json",
              split_labels;
  uint64_t split_seed = 0;
  split->add_option("--ids", split_ids, "file with one frame id per line")->required();
  split->add_option("--ratios", split_ratios, "train,val,test percentages");
  split->add_option("--seed", split_seed, "shuffle seed");
  split->add_option("--out", split_out, "manifest path");
  split->add_option("--labels", split_labels, "LabelMe dir for instance counts");

  auto* labels = app.add_subcommand("labels", "convert LabelMe JSON <-> YOLO-seg text");
  std::string labels_to, labels_in, labels_out;
  labels->add_option("--to", labels_to, "target format: yolo or labelme")->required();
  labels->add_option("--in", labels_in, "input directory")->required();
  labels->add_option("--out", labels_out, "output directory")->required();

  auto* track = app.add_subcommand("track", "run the tracker over replayed detections");
  std::string track_frames, track_dets, track_out = "tracks.csv", track_overlay;
  track->add_option("--frames", track_frames, "frames root directory")->required();
  track->add_option("--detections", track_dets, "detections JSON-Lines")->required();
  track->add_option("--out", track_out, "MOT CSV path");
  track->add_option("--overlay", track_overlay, "write annotated PNGs here");

  auto* eval = app.add_subcommand("eval", "score detections against LabelMe ground truth");
  std::string eval_dets, eval_labels, eval_kind = "box", eval_json;
  bool eval_wrap = false;
  eval->add_option("--detections", eval_dets, "detections JSON-Lines")->required();
  eval->add_option("--labels", eval_labels, "LabelMe ground-truth dir")->required();
  eval->add_option("--kind", eval_kind, "box or mask");
  eval->add_flag("--wrap", eval_wrap, "seam-aware IoU across the azimuth wrap");
  eval->add_option("--json", eval_json, "also write the report as JSON");

  auto* bench = app.add_subcommand("bench", "time the load+compose / detect / track stages");
  std::string bench_frames, bench_dets, bench_json;
  bench->add_option("--frames", bench_frames, "frames root directory")->required();
  bench->add_option("--detections", bench_dets, "detections JSON-Lines")->required();
  bench->add_option("--json", bench_json, "also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fprintf(stderr, "sripipe: error: UsageError: invalid arguments\n");
    return 64;
  }

  try {
    const sripipe::PipelineConfig cfg = resolve_config(config_flag);
    if (app.got_subcommand(convert))
      return run_convert(cfg, convert_points, convert_out);
    if (app.got_subcommand(compose))
      return run_compose(cfg, compose_frame, compose_out);
    if (app.got_subcommand(split))
      return run_split(split_ids, split_ratios, split_seed, split_out,
                       split_labels);
    if (app.got_subcommand(labels))
      return run_labels(cfg, labels_to, labels_in, labels_out);
    if (app.got_subcommand(track))
      return run_track(cfg, track_frames, track_dets, track_out, track_overlay);
    if (app.got_subcommand(eval))
      return run_eval(cfg, eval_dets, eval_labels, eval_kind, eval_wrap,
                      eval_json);
    if (app.got_subcommand(bench))
      return run_bench(cfg, bench_frames, bench_dets, bench_json);
  } catch (const sripipe::Error& e) {
    std::fprintf(stderr, "sripipe: error: %s: %s\n",
                 sripipe::errc_name(e.code()), e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sripipe: error: InternalError: %s\n", e.what());
    return 70;
  }
  return 0;
}
