#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "egogaze/lattice.hpp"

namespace egogaze {

enum class FeatureMode : std::uint8_t {
  MeanRgb,   // 3 values per cell
  Subblock,  // s x s sub-block mean RGB, 3*s*s values per cell
};

struct FeatureScheme {
  FeatureMode mode = FeatureMode::Subblock;
  int subblock = 4;
  bool include_flow = false;
  /// Flow magnitude (px/frame) mapped to the ends of the [0, 1] range.
  double max_displacement = 20.0;

  /// Length of every generator feature vector produced by this scheme.
  std::size_t dimension() const noexcept;
};

/// One decoded video frame, RGB24 row-major, with optional dense flow
/// stored as interleaved (dx, dy) pairs.
struct Frame {
  int width = 0;
  int height = 0;
  std::int64_t index = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<float> flow;

  bool has_flow() const noexcept { return !flow.empty(); }
};

/// Throws FrameError if the buffers disagree with the stated size.
void validate_frame(const Frame& frame);

/// Builds the feature configuration for one frame: one generator per cell,
/// features per `scheme`, zero energies and default spatial bonds.
///
/// Features are means over the cell (or sub-block) pixels divided by 255.
/// With `include_flow`, the cell-mean (dx, dy) is appended after dividing
/// by `max_displacement` and mapping [-1, 1] onto [0, 1] (clamped).
///
/// Throws FrameError on a size mismatch with `geometry`, MissingFlowError
/// when flow is required but absent, GeometryError when a cell is smaller
/// than the sub-block count.
Configuration feature_config(const Frame& frame, const GridGeometry& geometry,
                             const FeatureScheme& scheme);

}  // namespace egogaze
