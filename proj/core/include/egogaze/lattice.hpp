#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace egogaze {

/// Grid coordinate of one lattice cell.
struct CellIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

/// N x N tiling of a frame. Interior cells have floored sizes; the last
/// row and column absorb the remainder pixels.
class GridGeometry {
 public:
  GridGeometry() = default;

  int frame_width() const noexcept { return frame_width_; }
  int frame_height() const noexcept { return frame_height_; }
  int n() const noexcept { return n_; }
  int cell_width() const noexcept { return cell_width_; }
  int cell_height() const noexcept { return cell_height_; }
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Top-left pixel of cell (r, c).
  int offset_x(int col) const noexcept { return col * cell_width_; }
  int offset_y(int row) const noexcept { return row * cell_height_; }

  /// Actual pixel extent of a cell, including remainder absorption.
  PixelRect cell_rect(CellIndex cell) const noexcept;

  bool contains(CellIndex cell) const noexcept {
    return cell.row >= 0 && cell.col >= 0 && cell.row < n_ && cell.col < n_;
  }
  std::size_t flat(CellIndex cell) const noexcept {
    return static_cast<std::size_t>(cell.row) * n_ + cell.col;
  }
  CellIndex unflat(std::size_t i) const noexcept {
    return {static_cast<int>(i / n_), static_cast<int>(i % n_)};
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  friend GridGeometry build_geometry(int frame_width, int frame_height, int n);

  int frame_width_ = 0;
  int frame_height_ = 0;
  int n_ = 0;
  int cell_width_ = 0;
  int cell_height_ = 0;
};

/// Throws GeometryError unless n >= 2 and both frame dimensions are >= n.
GridGeometry build_geometry(int frame_width, int frame_height, int n);

enum class BondDirection : std::uint8_t { In, Out };
enum class BondKind : std::uint8_t { Spatial, Temporal };

/// Default energy of a spatial bond that has not been recomputed.
inline constexpr double kDefaultSpatialBondEnergy = 1.0;

struct BondEnd {
  CellIndex cell;
  int time_offset = 0;  // 0 = same configuration, i = i frames in the past
};

struct Bond {
  BondEnd from;
  BondEnd to;
  BondDirection direction = BondDirection::Out;
  BondKind kind = BondKind::Spatial;
  double energy = kDefaultSpatialBondEnergy;
};

/// One lattice cell: feature vector, surprise energy and bond count.
struct Generator {
  int row = 0;
  int col = 0;
  std::vector<double> features;
  double energy = 0.0;
  int arity = 0;
};

enum class Topology : std::uint8_t { Lattice };

/// N x N lattice of generators at one instant.
struct Configuration {
  GridGeometry geometry;
  std::vector<Generator> generators;  // row-major, exactly N*N
  Topology topology = Topology::Lattice;
  std::int64_t frame_index = 0;

  const Generator& at(CellIndex cell) const { return generators[geometry.flat(cell)]; }
  Generator& at(CellIndex cell) { return generators[geometry.flat(cell)]; }
};

/// Empty lattice (no features) with every generator placed.
Configuration make_configuration(const GridGeometry& geometry, std::int64_t frame_index);

/// Attaches the 4-neighbour spatial bonds: sets each generator's arity.
/// Bonds themselves stay implicit in the grid adjacency.
Configuration lattice_bonds(Configuration config);

/// Materialises the spatial bonds of an N x N lattice. Information flows
/// rightwards and downwards; each undirected adjacency appears twice with
/// the same endpoints, once as the Out bond held by `from` and once as the
/// In bond held by `to`.
std::vector<Bond> enumerate_spatial_bonds(const GridGeometry& geometry);

/// Number of 4-neighbours of a cell.
int spatial_degree(const GridGeometry& geometry, CellIndex cell) noexcept;

}  // namespace egogaze
