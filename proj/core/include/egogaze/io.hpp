#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egogaze/evalkit.hpp"
#include "egogaze/features.hpp"
#include "egogaze/pipeline.hpp"

namespace egogaze {

// ---------------------------------------------------------------------------
// Frames

/// Decodes a binary P6 PPM with maxval 255. Throws IoError.
Frame read_ppm(const std::filesystem::path& path, std::int64_t index);
void write_ppm(const std::filesystem::path& path, const Frame& frame);

/// Optical-flow sidecar: u32 width, u32 height (little-endian), then
/// width*height (dx, dy) float32 pairs.
std::vector<float> read_flo32(const std::filesystem::path& path, int width, int height);
void write_flo32(const std::filesystem::path& path, int width, int height,
                 std::span<const float> flow);

/// `*.ppm` files of a directory in lexicographic order, indexed from 0.
/// With a flow directory set, `<stem>.flo32` is attached to each frame.
class PpmDirectorySource : public FrameSource {
 public:
  explicit PpmDirectorySource(const std::filesystem::path& dir,
                              std::optional<std::filesystem::path> flow_dir = std::nullopt);

  std::optional<Frame> next() override;
  std::size_t size() const noexcept { return files_.size(); }

 private:
  std::vector<std::filesystem::path> files_;
  std::optional<std::filesystem::path> flow_dir_;
  std::size_t pos_ = 0;
  int width_ = 0;
  int height_ = 0;
};

/// `RAWVIDEO <width> <height> <fps>\n` followed by RGB24 frames until EOF.
/// Flow sidecars, when a directory is given, are named `<index:06>.flo32`.
class RawVideoSource : public FrameSource {
 public:
  explicit RawVideoSource(std::istream& in,
                          std::optional<std::filesystem::path> flow_dir = std::nullopt);

  std::optional<Frame> next() override;
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double fps() const noexcept { return fps_; }

 private:
  std::istream& in_;
  std::optional<std::filesystem::path> flow_dir_;
  int width_ = 0;
  int height_ = 0;
  double fps_ = 0.0;
  std::int64_t index_ = 0;
};

void write_rawvideo_header(std::ostream& out, int width, int height, double fps);

// ---------------------------------------------------------------------------
// Output formats

/// `frame,x,y,mode,energy` with energy at six decimals.
std::string format_gaze_row(const GazePrediction& gaze);
inline constexpr const char* kGazeCsvHeader = "frame,x,y,mode,energy";

/// `[{"frame":F,"energy":E,"z":Z},...]` with E and Z at six decimals.
std::string format_events_json(std::span<const EventBoundary> events);

class GazeCsvSink : public FrameSink {
 public:
  explicit GazeCsvSink(const std::filesystem::path& path);
  void consume(const FrameOutputs& outputs) override;
  void finish() override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class EnergiesCsvSink : public FrameSink {
 public:
  explicit EnergiesCsvSink(const std::filesystem::path& path);
  void consume(const FrameOutputs& outputs) override;
  void finish() override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class EventsJsonSink : public FrameSink {
 public:
  explicit EventsJsonSink(std::filesystem::path path) : path_(std::move(path)) {}
  void consume(const FrameOutputs& outputs) override;
  void finish() override;

  const std::vector<EventBoundary>& events() const noexcept { return events_; }

 private:
  std::filesystem::path path_;
  std::vector<EventBoundary> events_;
};

/// One PGM per frame, `frame_<index:06>.pgm`.
class HeatmapSink : public FrameSink {
 public:
  HeatmapSink(std::filesystem::path dir, double max_energy);
  void consume(const FrameOutputs& outputs) override;

 private:
  std::filesystem::path dir_;
  double max_energy_;
};

// ---------------------------------------------------------------------------
// Evaluation inputs. Schema violations throw SchemaError with the line.

/// Reads `frame,x,y[,valid]` (extra columns ignored, valid defaults to 1).
/// With bounds given, valid rows must lie inside [0, width) x [0, height).
std::vector<GazeRecord> read_gaze_csv(const std::filesystem::path& path,
                                      std::optional<std::pair<int, int>> bounds = std::nullopt);

struct FeatureTable {
  std::vector<std::int64_t> frames;
  Matrix rows;
};

/// CSV `frame,f0,f1,...` or binary FEAT32 (magic, u32 rows, u32 dims,
/// float32 row-major; frames numbered from 0).
FeatureTable read_feature_matrix(const std::filesystem::path& path);
void write_feat32(const std::filesystem::path& path, const Matrix& rows);

struct LabelTable {
  std::vector<std::int64_t> frames;
  std::vector<int> labels;
};

/// CSV `frame,label`.
LabelTable read_label_csv(const std::filesystem::path& path);

struct VideoSpan {
  std::string id;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;  // inclusive
};

/// Manifest CSV of `video_id,start_frame,end_frame` lines; a header line
/// starting with `video_id` is optional.
std::vector<VideoSpan> read_manifest(const std::filesystem::path& path);

std::vector<EventBoundary> read_events_json(const std::filesystem::path& path);

}  // namespace egogaze
