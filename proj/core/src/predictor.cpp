#include "egogaze/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egogaze/errors.hpp"

namespace egogaze {

void validate(const PredictorParams& params) {
  auto is_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_probability(params.p_c)) throw ConfigError("p_c must be in [0, 1]");
  if (!is_probability(params.p_fixed)) throw ConfigError("p_fixed must be in [0, 1]");
  if (params.center_sigma && !(*params.center_sigma > 0.0)) {
    throw ConfigError("center_sigma must be > 0");
  }
}

CenterBiasConfig make_center_bias(const GridGeometry& geometry, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("center_sigma must be > 0");
  CenterBiasConfig cb;
  cb.geometry = geometry;
  cb.sigma = sigma;
  cb.values.resize(geometry.cell_count());
  const double mid = 0.5 * (geometry.n() - 1);
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t i = 0; i < cb.values.size(); ++i) {
    const CellIndex cell = geometry.unflat(i);
    const double dr = cell.row - mid;
    const double dc = cell.col - mid;
    cb.values[i] = std::exp(-(dr * dr + dc * dc) / denom);
  }
  return cb;
}

CenterBiasConfig make_center_bias(const GridGeometry& geometry, const PredictorParams& params) {
  return make_center_bias(geometry, params.center_sigma.value_or(geometry.n() / 6.0));
}

CellIndex center_cell(const GridGeometry& geometry) noexcept {
  return {geometry.n() / 2, geometry.n() / 2};
}

std::string_view to_string(GazeMode mode) noexcept {
  switch (mode) {
    case GazeMode::Fixation:
      return "fixation";
    case GazeMode::Saccade:
      return "saccade";
    case GazeMode::CenterBias:
      return "center-bias";
  }
  return "unknown";
}

double distance_scale(CellIndex candidate, CellIndex previous, const GridGeometry& geometry) {
  const double dr = candidate.row - previous.row;
  const double dc = candidate.col - previous.col;
  return 1.0 + std::hypot(dr, dc) / (geometry.n() * std::sqrt(2.0));
}

PixelPoint cell_center(const GridGeometry& geometry, CellIndex cell) noexcept {
  const PixelRect r = geometry.cell_rect(cell);
  return {static_cast<int>(std::floor(r.x + 0.5 * r.width + 0.5)),
          static_cast<int>(std::floor(r.y + 0.5 * r.height + 0.5))};
}

GazePrediction predict_gaze(const SurpriseMap& surprise, const std::optional<GazePrediction>& prev,
                            const PredictorParams& params, const CenterBiasConfig& center_bias,
                            const EnergyParams& energy, UniformStream& rng) {
  const GridGeometry& geometry = surprise.geometry;
  if (!(center_bias.geometry == geometry)) {
    throw PipelineError("center bias grid does not match surprise map of frame " +
                        std::to_string(surprise.frame_index));
  }
  const CellIndex prev_cell = prev ? prev->cell : center_cell(geometry);
  if (!geometry.contains(prev_cell)) {
    throw PipelineError("previous gaze cell lies outside the grid at frame " +
                        std::to_string(surprise.frame_index));
  }

  const bool use_proposal = rng.next() < params.p_c;
  const std::vector<double>& values = use_proposal ? surprise.values : center_bias.values;

  const double gap_scale = 2.0 * energy.max_bond_energy();
  auto effective = [&](std::size_t i) {
    return values[i] / distance_scale(geometry.unflat(i), prev_cell, geometry);
  };

  std::size_t pick = geometry.flat(prev_cell);
  double pick_energy = effective(pick);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double candidate = effective(i);
    if (!(candidate > pick_energy)) continue;
    const double p = params.p_mode == AcceptanceMode::Fixed
                         ? params.p_fixed
                         : std::clamp((candidate - pick_energy) / gap_scale, 0.0, 1.0);
    if (rng.next() < p) {
      pick = i;
      pick_energy = candidate;
    }
  }

  GazePrediction out;
  out.frame_index = surprise.frame_index;
  out.cell = geometry.unflat(pick);
  const PixelPoint point = cell_center(geometry, out.cell);
  out.x = point.x;
  out.y = point.y;
  out.center_bias_branch = !use_proposal;
  if (out.cell == prev_cell) {
    out.mode = GazeMode::Fixation;
  } else {
    out.mode = use_proposal ? GazeMode::Saccade : GazeMode::CenterBias;
  }
  out.energy = surprise.values[pick] / distance_scale(out.cell, prev_cell, geometry);
  return out;
}

}  // namespace egogaze
