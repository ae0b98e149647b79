#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "egogaze/energy.hpp"
#include "egogaze/features.hpp"
#include "egogaze/predictor.hpp"
#include "egogaze/segmenter.hpp"
#include "egogaze/temporal.hpp"

namespace egogaze {

/// Every tunable of one run.
struct RunConfig {
  int n = 16;
  double fps = 30.0;
  std::optional<int> k;  // temporal window; round(fps) when unset
  FeatureScheme features;
  EnergyParams energy;
  DecayParams decay;
  PredictorParams predictor;
  GatingParams gating;

  int temporal_window() const;
};

/// Throws ConfigError if any component parameter is out of range.
void validate(const RunConfig& config);

/// Applies one `key = value` setting. Throws ConfigError on an unknown key
/// or unparsable value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads a flat `key = value` file ('#' starts a comment) into `config`.
void load_config_file(const std::filesystem::path& path, RunConfig& config);

struct FrameOutputs {
  GazePrediction gaze;
  double energy = 0.0;
  std::optional<EventBoundary> boundary;
  SurpriseMap surprise;
};

/// Streaming state for one video: history, previous gaze, gating
/// statistics and the predictor's random stream.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  /// Runs feature extraction, temporal aggregation, gaze prediction and
  /// boundary gating for the next frame. Frame indices must be consecutive
  /// and the frame size constant; violations throw PipelineError.
  FrameOutputs process_frame(const Frame& frame);

  const RunConfig& config() const noexcept { return config_; }
  const std::optional<GridGeometry>& geometry() const noexcept { return geometry_; }
  std::int64_t frames_processed() const noexcept { return frames_; }

  /// Bytes held by the streaming state (history features dominate).
  std::size_t resident_bytes() const noexcept;

 private:
  RunConfig config_;
  DecayWeights weights_;
  HistoryBuffer history_;
  Segmenter segmenter_;
  UniformStream rng_;
  std::optional<GridGeometry> geometry_;
  std::optional<CenterBiasConfig> center_bias_;
  std::optional<GazePrediction> prev_;
  std::optional<std::int64_t> last_index_;
  std::int64_t frames_ = 0;
};

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Next frame, or nullopt at end of stream. Throws IoError on decode failure.
  virtual std::optional<Frame> next() = 0;
};

class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void consume(const FrameOutputs& outputs) = 0;
  virtual void finish() {}
};

struct RunSummary {
  std::int64_t frames = 0;
  std::int64_t boundaries = 0;
  double seconds = 0.0;
  double fps = 0.0;
};

/// Drives a fresh Pipeline over `source`, routing every frame's outputs
/// to each sink in order, then calls finish() on each sink.
RunSummary process_stream(const RunConfig& config, FrameSource& source,
                          std::span<FrameSink* const> sinks);

}  // namespace egogaze
