#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "egogaze/errors.hpp"
#include "egogaze/evalkit.hpp"
#include "egogaze/io.hpp"
#include "egogaze/pipeline.hpp"
#include "egogaze/synthetic.hpp"

namespace egogaze::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Flags shared by predict, segment and bench.
struct RunFlags {
  std::string frames;
  std::optional<int> grid;
  std::optional<double> fps;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  std::string config_file;
  bool flow = false;
  std::string flow_dir;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--frames", f.frames, "PPM directory, RAWVIDEO file, or - for stdin")->required();
  cmd->add_option("--grid", f.grid, "Grid side N");
  cmd->add_option("--fps", f.fps, "Video frame rate (sets the temporal window)");
  cmd->add_option("--k", f.k, "Override the temporal window length");
  cmd->add_option("--seed", f.seed, "Random seed (default: $SURPRISE_SEED, else 42)");
  cmd->add_option("--config", f.config_file, "key = value run configuration file");
  cmd->add_flag("--flow", f.flow, "Append precomputed optical-flow features");
  cmd->add_option("--flow-dir", f.flow_dir, "Directory holding .flo32 flow sidecars");
}

// Precedence, lowest first: built-in defaults, $SURPRISE_SEED, config
// file, discovered stream fps, explicit flags.
RunConfig resolve_config(const RunFlags& f, std::optional<double> discovered_fps) {
  RunConfig config;
  if (const char* env = std::getenv("SURPRISE_SEED"); env && *env) {
    apply_setting(config, "seed", env);
  }
  if (!f.config_file.empty()) load_config_file(f.config_file, config);
  if (discovered_fps) config.fps = *discovered_fps;
  if (f.grid) config.n = *f.grid;
  if (f.fps) config.fps = *f.fps;
  if (f.k) config.k = *f.k;
  if (f.seed) config.predictor.seed = *f.seed;
  if (f.flow) config.features.include_flow = true;
  validate(config);
  return config;
}

class OpenedSource {
 public:
  explicit OpenedSource(const RunFlags& f) {
    std::optional<fs::path> flow_dir;
    if (!f.flow_dir.empty()) flow_dir = f.flow_dir;
    if (f.frames == "-") {
      auto raw = std::make_unique<RawVideoSource>(std::cin, flow_dir);
      fps_ = raw->fps();
      source_ = std::move(raw);
      return;
    }
    std::error_code ec;
    if (fs::is_directory(f.frames, ec)) {
      dir_ = f.frames;
      source_ = std::make_unique<PpmDirectorySource>(f.frames, flow_dir);
      return;
    }
    if (!fs::is_regular_file(f.frames, ec)) throw IoError("frames source " + f.frames + " not found");
    file_ = std::make_unique<std::ifstream>(f.frames, std::ios::binary);
    if (!*file_) throw IoError("cannot open " + f.frames);
    auto raw = std::make_unique<RawVideoSource>(*file_, flow_dir);
    fps_ = raw->fps();
    source_ = std::move(raw);
  }

  /// Reopens a directory source with flow attached from the frame directory
  /// when flow is requested without an explicit sidecar directory.
  void attach_default_flow(const RunConfig& config, const RunFlags& f) {
    if (!config.features.include_flow || !f.flow_dir.empty()) return;
    if (!dir_) throw ConfigError("--flow on a raw stream requires --flow-dir");
    source_ = std::make_unique<PpmDirectorySource>(*dir_, *dir_);
  }

  FrameSource& source() { return *source_; }
  std::optional<double> fps() const { return fps_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<FrameSource> source_;
  std::optional<fs::path> dir_;
  std::optional<double> fps_;
};

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EmptyEvaluationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

void report(std::ostream& err, const RunSummary& s) {
  err << "frames=" << s.frames << " boundaries=" << s.boundaries << " fps=" << fixed(s.fps, 1)
      << '\n';
}

int cmd_predict(const RunFlags& f, const std::string& out_path, const std::string& heatmaps,
                std::ostream& err) {
  OpenedSource opened(f);
  const RunConfig config = resolve_config(f, opened.fps());
  opened.attach_default_flow(config, f);
  GazeCsvSink gaze(out_path);
  std::vector<FrameSink*> sinks{&gaze};
  std::unique_ptr<HeatmapSink> maps;
  if (!heatmaps.empty()) {
    maps = std::make_unique<HeatmapSink>(heatmaps, config.energy.max_bond_energy());
    sinks.push_back(maps.get());
  }
  report(err, process_stream(config, opened.source(), sinks));
  return kExitOk;
}

int cmd_segment(const RunFlags& f, std::optional<double> lambda, std::optional<int> min_len,
                const std::string& out_path, const std::string& energies, std::ostream& err) {
  OpenedSource opened(f);
  RunConfig config = resolve_config(f, opened.fps());
  if (lambda) config.gating.lambda = *lambda;
  if (min_len) config.gating.min_event_len = *min_len;
  validate(config);
  opened.attach_default_flow(config, f);
  EventsJsonSink events(out_path);
  std::vector<FrameSink*> sinks{&events};
  std::unique_ptr<EnergiesCsvSink> energy_sink;
  if (!energies.empty()) {
    energy_sink = std::make_unique<EnergiesCsvSink>(energies);
    sinks.push_back(energy_sink.get());
  }
  report(err, process_stream(config, opened.source(), sinks));
  return kExitOk;
}

int cmd_bench(const RunFlags& f, int repeat, std::ostream& out, std::ostream& err) {
  if (repeat < 1) throw ConfigError("--repeat must be >= 1");
  OpenedSource opened(f);
  const RunConfig config = resolve_config(f, opened.fps());
  opened.attach_default_flow(config, f);
  std::vector<Frame> frames;
  while (auto frame = opened.source().next()) frames.push_back(std::move(*frame));
  if (frames.empty()) throw IoError("no frames found in " + f.frames);

  std::vector<double> fps;
  double checksum = 0.0;
  for (int r = 0; r < repeat; ++r) {
    Pipeline pipeline(config);
    const auto start = std::chrono::steady_clock::now();
    for (const auto& frame : frames) {
      const FrameOutputs o = pipeline.process_frame(frame);
      checksum += o.energy + o.gaze.x;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fps.push_back(static_cast<double>(frames.size()) / seconds);
  }
  std::sort(fps.begin(), fps.end());
  const std::size_t mid = fps.size() / 2;
  const double median = fps.size() % 2 ? fps[mid] : 0.5 * (fps[mid - 1] + fps[mid]);
  out << "frames=" << frames.size() << '\n'
      << "repeats=" << repeat << '\n'
      << "fps_min=" << fixed(fps.front(), 2) << '\n'
      << "fps_median=" << fixed(median, 2) << '\n'
      << "fps_max=" << fixed(fps.back(), 2) << '\n';
  err << "checksum=" << fixed(checksum, 6) << '\n';
  return kExitOk;
}

int cmd_eval_aae(const std::string& pred_path, const std::string& gt_path, int width, int height,
                 double fov, std::ostream& out) {
  const CameraModel camera(width, height, fov);
  const auto bounds = std::make_pair(width, height);
  const auto pred = read_gaze_csv(pred_path, bounds);
  const auto truth = read_gaze_csv(gt_path, bounds);
  out << "aae_degrees=" << fixed(aae(pred, truth, camera), 4) << '\n';
  return kExitOk;
}

int cmd_eval_seg(const std::string& boundaries_path, const std::string& features_path,
                 const std::string& gt_path, int k, const std::string& manifest_path,
                 std::uint64_t seed, std::ostream& out) {
  const FeatureTable features = read_feature_matrix(features_path);
  const LabelTable labels = read_label_csv(gt_path);
  if (labels.frames != features.frames) {
    throw ConfigError("ground-truth labels and features must list the same frames in the same order");
  }
  std::unordered_map<std::int64_t, std::size_t> row_of;
  for (std::size_t r = 0; r < features.frames.size(); ++r) {
    if (!row_of.emplace(features.frames[r], r).second) {
      throw ConfigError("frame " + std::to_string(features.frames[r]) + " appears twice in " +
                        features_path);
    }
  }
  auto lookup = [&](std::int64_t frame, const std::string& what) {
    const auto it = row_of.find(frame);
    if (it == row_of.end()) {
      throw ConfigError(what + " frame " + std::to_string(frame) + " has no feature row");
    }
    return it->second;
  };

  SegmentationInput input;
  input.features = features.rows;
  input.truth_labels = labels.labels;
  input.k = k;
  input.seed = seed;
  for (const auto& b : read_events_json(boundaries_path)) {
    input.boundaries.push_back(lookup(b.frame_index, "boundary"));
  }
  std::vector<FrameRange> videos;
  if (!manifest_path.empty()) {
    for (const auto& span : read_manifest(manifest_path)) {
      videos.push_back({lookup(span.start_frame, "manifest"), lookup(span.end_frame, "manifest")});
    }
  }
  out << "seg_accuracy=" << fixed(segmentation_accuracy(input, videos), 4) << '\n';
  return kExitOk;
}

int cmd_synth(const std::string& kind, const std::string& dir, int count, int width, int height,
              std::uint64_t seed, const std::string& gt_path, std::ostream& err) {
  if (count < 0) throw ConfigError("--count must be >= 0");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create " + dir);

  synthetic::MovingSquare square;
  square.width = width;
  square.height = height;
  square.frames = count;
  square.seed = seed;
  synthetic::TwoRegime regimes;
  regimes.width = width;
  regimes.height = height;
  regimes.frames = count;
  regimes.seed = seed;
  regimes.switch_frame = count / 3;

  std::ofstream gt;
  if (!gt_path.empty()) {
    if (kind != "moving-square") throw ConfigError("--gt is only available for moving-square");
    gt.open(gt_path, std::ios::binary);
    if (!gt) throw IoError("cannot open " + gt_path);
    gt << "frame,x,y,valid\n";
  }
  for (int t = 0; t < count; ++t) {
    Frame frame;
    if (kind == "moving-square") {
      frame = square.frame(t);
      if (gt) {
        gt << t << ',' << fixed(square.center_x(t), 1) << ',' << fixed(square.center_y(), 1)
           << ",1\n";
      }
    } else if (kind == "two-regime") {
      frame = regimes.frame(t);
    } else if (kind == "constant") {
      frame = synthetic::constant_frame(width, height, t, 128, 128, 128);
    } else if (kind == "flicker") {
      frame = synthetic::flicker_frame(width, height, t, seed);
    } else {
      throw ConfigError("unknown synthetic kind '" + kind + "'");
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.ppm", t);
    write_ppm(fs::path(dir) / name, frame);
  }
  err << "wrote " << count << " frames to " << dir << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Training-free egocentric gaze prediction and event segmentation", "egogaze"};
  app.require_subcommand(1);

  RunFlags predict_flags;
  std::string predict_out, heatmaps;
  auto* predict = app.add_subcommand("predict", "Predict a gaze point for every frame");
  add_run_flags(predict, predict_flags);
  predict->add_option("--out", predict_out, "Gaze CSV output")->required();
  predict->add_option("--heatmaps", heatmaps, "Directory for per-frame surprise PGMs");

  RunFlags segment_flags;
  std::string segment_out, energies;
  std::optional<double> lambda;
  std::optional<int> min_len;
  auto* segment = app.add_subcommand("segment", "Detect event boundaries");
  add_run_flags(segment, segment_flags);
  segment->add_option("--lambda", lambda, "Gating threshold in standard deviations (2.5)");
  segment->add_option("--min-len", min_len, "Minimum event length in frames (15)");
  segment->add_option("--out", segment_out, "Events JSON output")->required();
  segment->add_option("--energies", energies, "Per-frame configuration energy CSV");

  auto* eval = app.add_subcommand("eval", "Score predictions");
  eval->require_subcommand(1);
  std::string pred_path, gaze_gt;
  int width = 0, height = 0;
  double fov = 60.0;
  auto* eval_aae = eval->add_subcommand("aae", "Average angular error of gaze predictions");
  eval_aae->add_option("--pred", pred_path, "Predicted gaze CSV")->required();
  eval_aae->add_option("--gt", gaze_gt, "Ground-truth gaze CSV")->required();
  eval_aae->add_option("--width", width, "Frame width in pixels")->required();
  eval_aae->add_option("--height", height, "Frame height in pixels")->required();
  eval_aae->add_option("--fov", fov, "Horizontal field of view in degrees (60)");

  std::string boundaries_path, features_path, labels_path, manifest_path;
  int seg_k = 0;
  std::uint64_t seg_seed = 42;
  auto* eval_seg = eval->add_subcommand("seg", "Hungarian-aligned segmentation accuracy");
  eval_seg->add_option("--boundaries", boundaries_path, "Events JSON")->required();
  eval_seg->add_option("--features", features_path, "Per-frame features (CSV or FEAT32)")->required();
  eval_seg->add_option("--gt", labels_path, "Ground-truth frame,label CSV")->required();
  eval_seg->add_option("--k", seg_k, "Number of classes")->required();
  eval_seg->add_option("--per-video", manifest_path, "video_id,start_frame,end_frame manifest");
  eval_seg->add_option("--seed", seg_seed, "k-means seed (42)");

  RunFlags bench_flags;
  int repeat = 3;
  auto* bench = app.add_subcommand("bench", "Measure single-threaded throughput");
  add_run_flags(bench, bench_flags);
  bench->add_option("--repeat", repeat, "Number of timed passes (3)");

  std::string synth_kind, synth_out, synth_gt;
  int synth_count = 300, synth_w = 640, synth_h = 480;
  std::uint64_t synth_seed = 7;
  auto* synth = app.add_subcommand("synth", "Write a synthetic PPM sequence");
  synth->add_option("kind", synth_kind, "moving-square | two-regime | constant | flicker")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--count", synth_count, "Number of frames (300)");
  synth->add_option("--width", synth_w, "Frame width (640)");
  synth->add_option("--height", synth_h, "Frame height (480)");
  synth->add_option("--seed", synth_seed, "Texture seed (7)");
  synth->add_option("--gt", synth_gt, "Write the square-centre gaze CSV (moving-square)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return guarded(err, [&]() -> int {
    if (*predict) return cmd_predict(predict_flags, predict_out, heatmaps, err);
    if (*segment) return cmd_segment(segment_flags, lambda, min_len, segment_out, energies, err);
    if (*bench) return cmd_bench(bench_flags, repeat, out, err);
    if (*synth) {
      return cmd_synth(synth_kind, synth_out, synth_count, synth_w, synth_h, synth_seed, synth_gt,
                       err);
    }
    if (*eval_aae) return cmd_eval_aae(pred_path, gaze_gt, width, height, fov, out);
    return cmd_eval_seg(boundaries_path, features_path, labels_path, seg_k, manifest_path, seg_seed,
                        out);
  });
}

}  // namespace egogaze::cli
