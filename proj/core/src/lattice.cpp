#include "egogaze/lattice.hpp"

#include <string>

#include "egogaze/errors.hpp"

namespace egogaze {

PixelRect GridGeometry::cell_rect(CellIndex cell) const noexcept {
  PixelRect r;
  r.x = offset_x(cell.col);
  r.y = offset_y(cell.row);
  r.width = cell.col == n_ - 1 ? frame_width_ - r.x : cell_width_;
  r.height = cell.row == n_ - 1 ? frame_height_ - r.y : cell_height_;
  return r;
}

GridGeometry build_geometry(int frame_width, int frame_height, int n) {
  if (n < 2) {
    throw GeometryError("grid side must be >= 2, got " + std::to_string(n));
  }
  if (frame_width < n || frame_height < n) {
    throw GeometryError("frame " + std::to_string(frame_width) + "x" +
                        std::to_string(frame_height) + " is smaller than a " +
                        std::to_string(n) + "x" + std::to_string(n) + " grid");
  }
  GridGeometry g;
  g.frame_width_ = frame_width;
  g.frame_height_ = frame_height;
  g.n_ = n;
  g.cell_width_ = frame_width / n;
  g.cell_height_ = frame_height / n;
  return g;
}

Configuration make_configuration(const GridGeometry& geometry, std::int64_t frame_index) {
  Configuration config;
  config.geometry = geometry;
  config.frame_index = frame_index;
  config.generators.resize(geometry.cell_count());
  for (std::size_t i = 0; i < config.generators.size(); ++i) {
    const CellIndex cell = geometry.unflat(i);
    config.generators[i].row = cell.row;
    config.generators[i].col = cell.col;
  }
  return config;
}

int spatial_degree(const GridGeometry& geometry, CellIndex cell) noexcept {
  const int n = geometry.n();
  int degree = 0;
  if (cell.row > 0) ++degree;
  if (cell.row < n - 1) ++degree;
  if (cell.col > 0) ++degree;
  if (cell.col < n - 1) ++degree;
  return degree;
}

Configuration lattice_bonds(Configuration config) {
  for (auto& g : config.generators) {
    g.arity = spatial_degree(config.geometry, {g.row, g.col});
  }
  return config;
}

std::vector<Bond> enumerate_spatial_bonds(const GridGeometry& geometry) {
  const int n = geometry.n();
  std::vector<Bond> bonds;
  bonds.reserve(static_cast<std::size_t>(4) * n * (n - 1));
  auto link = [&](CellIndex a, CellIndex b) {
    bonds.push_back({{a, 0}, {b, 0}, BondDirection::Out, BondKind::Spatial,
                     kDefaultSpatialBondEnergy});
    bonds.push_back({{a, 0}, {b, 0}, BondDirection::In, BondKind::Spatial,
                     kDefaultSpatialBondEnergy});
  };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) link({r, c}, {r, c + 1});
      if (r + 1 < n) link({r, c}, {r + 1, c});
    }
  }
  return bonds;
}

}  // namespace egogaze
