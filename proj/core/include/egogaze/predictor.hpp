#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "egogaze/energy.hpp"
#include "egogaze/lattice.hpp"
#include "egogaze/rng.hpp"
#include "egogaze/surprise_map.hpp"

namespace egogaze {

enum class AcceptanceMode : std::uint8_t {
  Proportional,  // p = energy gap / (2 * w_s * tanh(alpha))
  Fixed,         // p = p_fixed
};

struct PredictorParams {
  double p_c = 0.95;  // probability of using the surprise proposal
  AcceptanceMode p_mode = AcceptanceMode::Proportional;
  double p_fixed = 0.5;
  std::optional<double> center_sigma;  // in cells; N / 6 when unset
  std::uint64_t seed = 42;
};

void validate(const PredictorParams& params);

/// Gaussian bump with unit peak centred on the middle of the grid.
struct CenterBiasConfig {
  GridGeometry geometry;
  double sigma = 0.0;
  std::vector<double> values;  // row-major N*N
};

CenterBiasConfig make_center_bias(const GridGeometry& geometry, double sigma);
CenterBiasConfig make_center_bias(const GridGeometry& geometry, const PredictorParams& params);

/// Cell used when there is no previous prediction: (N/2, N/2), floored.
CellIndex center_cell(const GridGeometry& geometry) noexcept;

enum class GazeMode : std::uint8_t { Fixation, Saccade, CenterBias };

std::string_view to_string(GazeMode mode) noexcept;

struct GazePrediction {
  std::int64_t frame_index = 0;
  CellIndex cell;
  int x = 0;
  int y = 0;
  GazeMode mode = GazeMode::Fixation;
  /// Distance-scaled surprise of the chosen cell.
  double energy = 0.0;
  /// True when the first acceptor replaced the proposal by the center bias.
  bool center_bias_branch = false;
};

/// 1 + |candidate - previous| / (N * sqrt(2)), in [1, 2).
double distance_scale(CellIndex candidate, CellIndex previous, const GridGeometry& geometry);

/// Pixel centre of a cell: offset plus half the cell extent, rounded half-up.
struct PixelPoint {
  int x = 0;
  int y = 0;
};
PixelPoint cell_center(const GridGeometry& geometry, CellIndex cell) noexcept;

/// One step of the two-acceptor gaze search.
///
/// The first draw picks the surprise map (u < p_c) or the center-bias
/// configuration. The search starts at the previous cell and scans cells in
/// row-major order; every cell whose distance-scaled energy strictly
/// exceeds the current pick costs one draw and replaces it with
/// probability p_eff. Ties never draw. `surprise` is not modified.
///
/// Throws PipelineError when the map or center bias disagree on geometry.
GazePrediction predict_gaze(const SurpriseMap& surprise, const std::optional<GazePrediction>& prev,
                            const PredictorParams& params, const CenterBiasConfig& center_bias,
                            const EnergyParams& energy, UniformStream& rng);

}  // namespace egogaze
