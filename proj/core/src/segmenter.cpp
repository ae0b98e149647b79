#include "egogaze/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egogaze/errors.hpp"

namespace egogaze {

void validate(const GatingParams& params) {
  if (!(params.lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (params.min_event_len < 1) throw ConfigError("min_event_len must be >= 1");
  if (params.warmup && *params.warmup < 0) throw ConfigError("warmup must be >= 0");
}

void RunningStats::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const noexcept {
  if (count_ < 2) return 0.0;
  return std::max(0.0, m2_ / static_cast<double>(count_ - 1));
}

double RunningStats::stddev() const noexcept { return std::sqrt(variance()); }

Segmenter::Segmenter(const GatingParams& params, int default_warmup)
    : params_(params), warmup_(params.warmup.value_or(default_warmup)) {
  validate(params_);
}

std::optional<EventBoundary> Segmenter::observe(double energy, std::int64_t frame) {
  if (last_frame_ && frame <= *last_frame_) {
    throw PipelineError("segmenter received frame " + std::to_string(frame) + " after frame " +
                        std::to_string(*last_frame_));
  }
  last_frame_ = frame;
  if (!first_frame_) first_frame_ = segment_start_ = frame;

  const double mean = stats_.mean();
  const double sd = stats_.stddev();
  const bool eligible = frame - *first_frame_ >= warmup_ && frame - *segment_start_ >= params_.min_event_len &&
                        stats_.count() >= 2;
  if (eligible && energy > mean + params_.lambda * sd) {
    EventBoundary b;
    b.frame_index = frame;
    b.energy = energy;
    b.z = sd > 0.0 ? std::min((energy - mean) / sd, kMaxZ) : kMaxZ;
    stats_.reset();
    segment_start_ = frame;
    return b;
  }
  stats_.add(energy);
  return std::nullopt;
}

}  // namespace egogaze
