#pragma once

#include <cstdint>
#include <optional>

namespace egogaze {

struct GatingParams {
  double lambda = 2.5;     // threshold in running standard deviations
  int min_event_len = 15;  // frames between boundaries
  std::optional<int> warmup;  // frames before gating; defaults to the temporal window
};

void validate(const GatingParams& params);

/// Welford accumulator of configuration energy since the last boundary.
class RunningStats {
 public:
  void add(double x) noexcept;
  void reset() noexcept { *this = RunningStats{}; }

  std::int64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Sample variance (n - 1 denominator); 0 with fewer than two samples.
  double variance() const noexcept;
  double stddev() const noexcept;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EventBoundary {
  std::int64_t frame_index = 0;
  double energy = 0.0;
  double z = 0.0;  // saturates at kMaxZ when the running deviation is zero
};

inline constexpr double kMaxZ = 1e9;

/// Error-gated boundary detector over a stream of configuration energies.
class Segmenter {
 public:
  /// `default_warmup` applies when params.warmup is unset.
  Segmenter(const GatingParams& params, int default_warmup);

  /// Feeds the energy of `frame`. A boundary fires when the frame is at
  /// least `warmup` frames after the first observed one, at least min_event_len frames follow the previous boundary
  /// (or the stream start), two or more energies have been seen since
  /// then, and energy > mean + lambda * std. Firing resets the statistics;
  /// otherwise the energy is folded in.
  ///
  /// Throws PipelineError unless frames arrive in increasing order.
  std::optional<EventBoundary> observe(double energy, std::int64_t frame);

  const RunningStats& stats() const noexcept { return stats_; }
  int warmup() const noexcept { return warmup_; }

 private:
  GatingParams params_;
  int warmup_;
  RunningStats stats_;
  std::optional<std::int64_t> last_frame_;
  std::optional<std::int64_t> first_frame_;
  std::optional<std::int64_t> segment_start_;
};

}  // namespace egogaze
