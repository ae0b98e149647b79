#include "egogaze/features.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "egogaze/errors.hpp"

namespace egogaze {

namespace {

int blocks_per_side(const FeatureScheme& scheme) {
  return scheme.mode == FeatureMode::MeanRgb ? 1 : scheme.subblock;
}

// Maps every pixel coordinate along one axis to its (cell, sub-block) slot.
// Cells and sub-blocks both use floored sizes with the last one absorbing
// the remainder.
std::vector<int> axis_slots(int extent, int cell_size, int n, int s) {
  std::vector<int> slots(static_cast<std::size_t>(extent));
  for (int cell = 0; cell < n; ++cell) {
    const int start = cell * cell_size;
    const int len = cell == n - 1 ? extent - start : cell_size;
    const int sub = len / s;
    for (int p = 0; p < len; ++p) {
      const int j = std::min(p / sub, s - 1);
      slots[static_cast<std::size_t>(start + p)] = cell * s + j;
    }
  }
  return slots;
}

std::vector<int> slot_sizes(const std::vector<int>& slots, int count) {
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int s : slots) ++sizes[static_cast<std::size_t>(s)];
  return sizes;
}

}  // namespace

std::size_t FeatureScheme::dimension() const noexcept {
  const auto s = static_cast<std::size_t>(blocks_per_side(*this));
  return 3 * s * s + (include_flow ? 2 : 0);
}

void validate_frame(const Frame& frame) {
  if (frame.width <= 0 || frame.height <= 0) {
    throw FrameError("frame " + std::to_string(frame.index) + " has empty dimensions");
  }
  const auto area = static_cast<std::size_t>(frame.width) * frame.height;
  if (frame.pixels.size() != area * 3) {
    throw FrameError("frame " + std::to_string(frame.index) + " holds " +
                     std::to_string(frame.pixels.size()) + " bytes, expected " +
                     std::to_string(area * 3));
  }
  if (frame.has_flow() && frame.flow.size() != area * 2) {
    throw FrameError("frame " + std::to_string(frame.index) + " flow holds " +
                     std::to_string(frame.flow.size() / 2) + " vectors, expected " +
                     std::to_string(area));
  }
}

Configuration feature_config(const Frame& frame, const GridGeometry& geometry,
                             const FeatureScheme& scheme) {
  validate_frame(frame);
  if (frame.width != geometry.frame_width() || frame.height != geometry.frame_height()) {
    throw FrameError("frame " + std::to_string(frame.index) + " is " +
                     std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                     ", grid expects " + std::to_string(geometry.frame_width()) + "x" +
                     std::to_string(geometry.frame_height()));
  }
  if (scheme.include_flow && !frame.has_flow()) {
    throw MissingFlowError("frame " + std::to_string(frame.index) +
                           " has no optical flow but the feature scheme requires it");
  }
  const int s = blocks_per_side(scheme);
  if (s < 1) throw ConfigError("sub-block count must be >= 1");
  if (scheme.include_flow && !(scheme.max_displacement > 0.0)) {
    throw ConfigError("max_displacement must be > 0");
  }
  if (geometry.cell_width() < s || geometry.cell_height() < s) {
    throw GeometryError("cells of " + std::to_string(geometry.cell_width()) + "x" +
                        std::to_string(geometry.cell_height()) + " px cannot hold " +
                        std::to_string(s) + "x" + std::to_string(s) + " sub-blocks");
  }

  const int n = geometry.n();
  const int side = n * s;
  const auto xs = axis_slots(frame.width, geometry.cell_width(), n, s);
  const auto ys = axis_slots(frame.height, geometry.cell_height(), n, s);
  const auto xsize = slot_sizes(xs, side);
  const auto ysize = slot_sizes(ys, side);

  std::vector<std::uint64_t> acc(static_cast<std::size_t>(side) * side * 3, 0);
  const std::uint8_t* px = frame.pixels.data();
  for (int y = 0; y < frame.height; ++y) {
    std::uint64_t* row = acc.data() + static_cast<std::size_t>(ys[y]) * side * 3;
    for (int x = 0; x < frame.width; ++x, px += 3) {
      std::uint64_t* slot = row + static_cast<std::size_t>(xs[x]) * 3;
      slot[0] += px[0];
      slot[1] += px[1];
      slot[2] += px[2];
    }
  }

  std::vector<double> flow_acc;
  if (scheme.include_flow) {
    flow_acc.assign(geometry.cell_count() * 2, 0.0);
    const float* f = frame.flow.data();
    for (int y = 0; y < frame.height; ++y) {
      const int cr = ys[y] / s;
      for (int x = 0; x < frame.width; ++x, f += 2) {
        const std::size_t cell = static_cast<std::size_t>(cr) * n + xs[x] / s;
        flow_acc[cell * 2] += f[0];
        flow_acc[cell * 2 + 1] += f[1];
      }
    }
  }

  Configuration config = make_configuration(geometry, frame.index);
  const std::size_t dim = scheme.dimension();
  for (auto& g : config.generators) {
    g.features.resize(dim);
    std::size_t k = 0;
    for (int i = 0; i < s; ++i) {
      const int sy = g.row * s + i;
      for (int j = 0; j < s; ++j) {
        const int sx = g.col * s + j;
        const double area = static_cast<double>(ysize[sy]) * xsize[sx];
        const std::uint64_t* slot =
            acc.data() + (static_cast<std::size_t>(sy) * side + sx) * 3;
        for (int ch = 0; ch < 3; ++ch) {
          g.features[k++] = static_cast<double>(slot[ch]) / (area * 255.0);
        }
      }
    }
    if (scheme.include_flow) {
      const PixelRect rect = geometry.cell_rect({g.row, g.col});
      const double area = static_cast<double>(rect.width) * rect.height;
      const std::size_t cell = geometry.flat({g.row, g.col});
      for (int ch = 0; ch < 2; ++ch) {
        const double mean = flow_acc[cell * 2 + ch] / area;
        g.features[k++] = std::clamp(0.5 * (mean / scheme.max_displacement + 1.0), 0.0, 1.0);
      }
    }
  }
  return lattice_bonds(std::move(config));
}

}  // namespace egogaze
