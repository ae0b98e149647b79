#pragma once

#include <cstdint>
#include <vector>

#include "egogaze/lattice.hpp"

namespace egogaze {

/// Per-cell aggregated temporal surprise at one frame (the attention map).
struct SurpriseMap {
  GridGeometry geometry;
  std::vector<double> values;  // row-major N*N, each >= 0
  std::int64_t frame_index = 0;

  static SurpriseMap zeros(const GridGeometry& geometry, std::int64_t frame_index) {
    return {geometry, std::vector<double>(geometry.cell_count(), 0.0), frame_index};
  }

  double at(CellIndex cell) const { return values[geometry.flat(cell)]; }
  double& at(CellIndex cell) { return values[geometry.flat(cell)]; }
};

}  // namespace egogaze
