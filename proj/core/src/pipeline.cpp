#include "egogaze/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>

#include "egogaze/errors.hpp"

namespace egogaze {

int RunConfig::temporal_window() const {
  if (k) return *k;
  if (!(fps > 0.0)) throw ConfigError("fps must be > 0");
  return static_cast<int>(std::lround(fps));
}

void validate(const RunConfig& config) {
  if (config.n < 2) throw ConfigError("grid side must be >= 2");
  if (!(config.fps > 0.0)) throw ConfigError("fps must be > 0");
  if (config.temporal_window() < 1) throw ConfigError("temporal window must be >= 1");
  if (config.features.mode == FeatureMode::Subblock && config.features.subblock < 1) {
    throw ConfigError("subblock must be >= 1");
  }
  if (!(config.features.max_displacement > 0.0)) throw ConfigError("max_displacement must be > 0");
  validate(config.energy);
  decay_weights(1, config.decay);
  validate(config.predictor);
  validate(config.gating);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

[[noreturn]] void bad_choice(std::string_view key, std::string_view value) {
  throw ConfigError("invalid choice '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "grid" || key == "n") {
    config.n = parse_number<int>(key, value);
  } else if (key == "fps") {
    config.fps = parse_number<double>(key, value);
  } else if (key == "k") {
    config.k = parse_number<int>(key, value);
  } else if (key == "feature_mode") {
    if (value == "mean-rgb") {
      config.features.mode = FeatureMode::MeanRgb;
    } else if (value == "subblock") {
      config.features.mode = FeatureMode::Subblock;
    } else {
      bad_choice(key, value);
    }
  } else if (key == "subblock") {
    config.features.subblock = parse_number<int>(key, value);
  } else if (key == "include_flow") {
    config.features.include_flow = parse_bool(key, value);
  } else if (key == "max_displacement") {
    config.features.max_displacement = parse_number<double>(key, value);
  } else if (key == "w_s") {
    config.energy.w_s = parse_number<double>(key, value);
  } else if (key == "alpha") {
    config.energy.alpha = parse_number<double>(key, value);
  } else if (key == "motion_mode") {
    if (value == "pearson-dissimilarity") {
      config.energy.motion_mode = MotionMode::PearsonDissimilarity;
    } else if (value == "raw-covariance") {
      config.energy.motion_mode = MotionMode::RawCovariance;
    } else {
      bad_choice(key, value);
    }
  } else if (key == "decay_a") {
    config.decay.a = parse_number<double>(key, value);
  } else if (key == "decay_b") {
    config.decay.b = parse_number<double>(key, value);
  } else if (key == "decay_form") {
    if (value == "one-minus-b") {
      config.decay.form = DecayForm::OneMinusB;
    } else if (value == "b") {
      config.decay.form = DecayForm::B;
    } else {
      bad_choice(key, value);
    }
  } else if (key == "p_c") {
    config.predictor.p_c = parse_number<double>(key, value);
  } else if (key == "p_mode") {
    if (value == "proportional") {
      config.predictor.p_mode = AcceptanceMode::Proportional;
    } else if (value == "fixed") {
      config.predictor.p_mode = AcceptanceMode::Fixed;
    } else {
      bad_choice(key, value);
    }
  } else if (key == "p_fixed") {
    config.predictor.p_fixed = parse_number<double>(key, value);
  } else if (key == "center_sigma") {
    config.predictor.center_sigma = parse_number<double>(key, value);
  } else if (key == "seed") {
    config.predictor.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "lambda") {
    config.gating.lambda = parse_number<double>(key, value);
  } else if (key == "min_event_len") {
    config.gating.min_event_len = parse_number<int>(key, value);
  } else if (key == "warmup") {
    config.gating.warmup = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError(path.string() + ": expected 'key = value'", number);
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const SchemaError&) {
      throw;
    } catch (const ConfigError& e) {
      throw SchemaError(path.string() + ": " + e.what(), number);
    }
  }
}

Pipeline::Pipeline(RunConfig config)
    : config_((validate(config), std::move(config))),
      weights_(decay_weights(config_.temporal_window(), config_.decay)),
      history_(config_.temporal_window()),
      segmenter_(config_.gating, config_.temporal_window()),
      rng_(config_.predictor.seed) {}

FrameOutputs Pipeline::process_frame(const Frame& frame) {
  if (last_index_ && frame.index != *last_index_ + 1) {
    throw PipelineError("frame " + std::to_string(frame.index) + " does not follow frame " +
                        std::to_string(*last_index_));
  }
  if (!geometry_) {
    try {
      geometry_ = build_geometry(frame.width, frame.height, config_.n);
    } catch (const GeometryError& e) {
      throw GeometryError("frame " + std::to_string(frame.index) + ": " + e.what());
    }
    center_bias_ = make_center_bias(*geometry_, config_.predictor);
  } else if (frame.width != geometry_->frame_width() || frame.height != geometry_->frame_height()) {
    throw PipelineError("frame " + std::to_string(frame.index) + " is " +
                        std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                        ", stream started at " + std::to_string(geometry_->frame_width()) + "x" +
                        std::to_string(geometry_->frame_height()));
  }

  Configuration current = feature_config(frame, *geometry_, config_.features);
  FrameOutputs out;
  out.surprise = temporal_aggregate(current, history_, weights_, config_.energy);
  out.gaze = predict_gaze(out.surprise, prev_, config_.predictor, *center_bias_, config_.energy,
                          rng_);
  out.energy = configuration_energy(out.surprise);
  out.boundary = segmenter_.observe(out.energy, frame.index);

  history_.push(std::move(current));
  prev_ = out.gaze;
  last_index_ = frame.index;
  ++frames_;
  return out;
}

std::size_t Pipeline::resident_bytes() const noexcept {
  std::size_t bytes = sizeof(*this) + weights_.weights.capacity() * sizeof(double);
  if (center_bias_) bytes += center_bias_->values.capacity() * sizeof(double);
  for (std::size_t i = 1; i <= history_.size(); ++i) {
    const Configuration& c = history_.lag(i);
    bytes += c.generators.capacity() * sizeof(Generator);
    for (const auto& g : c.generators) bytes += g.features.capacity() * sizeof(double);
  }
  return bytes;
}

RunSummary process_stream(const RunConfig& config, FrameSource& source,
                          std::span<FrameSink* const> sinks) {
  Pipeline pipeline(config);
  RunSummary summary;
  const auto start = std::chrono::steady_clock::now();
  while (auto frame = source.next()) {
    FrameOutputs out = pipeline.process_frame(*frame);
    if (out.boundary) ++summary.boundaries;
    for (FrameSink* sink : sinks) sink->consume(out);
    ++summary.frames;
  }
  for (FrameSink* sink : sinks) sink->finish();
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.fps = summary.seconds > 0.0 ? static_cast<double>(summary.frames) / summary.seconds : 0.0;
  return summary;
}

}  // namespace egogaze
