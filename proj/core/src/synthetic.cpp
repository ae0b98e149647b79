#include "egogaze/synthetic.hpp"

#include <algorithm>

#include "egogaze/rng.hpp"

namespace egogaze::synthetic {

Frame constant_frame(int width, int height, std::int64_t index, std::uint8_t r, std::uint8_t g,
                     std::uint8_t b) {
  Frame f;
  f.width = width;
  f.height = height;
  f.index = index;
  f.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    f.pixels[i] = r;
    f.pixels[i + 1] = g;
    f.pixels[i + 2] = b;
  }
  return f;
}

Frame noise_texture(int width, int height, int grain, int base, int amplitude, std::uint64_t seed,
                    std::int64_t index) {
  UniformStream rng(seed);
  const int tiles_x = (width + grain - 1) / grain;
  const int tiles_y = (height + grain - 1) / grain;
  std::vector<std::uint8_t> tiles(static_cast<std::size_t>(tiles_x) * tiles_y * 3);
  for (auto& t : tiles) {
    const double v = base + (2.0 * rng.next() - 1.0) * amplitude;
    t = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v + 0.5), 0, 255));
  }
  Frame f;
  f.width = width;
  f.height = height;
  f.index = index;
  f.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  std::uint8_t* p = f.pixels.data();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x, p += 3) {
      const std::uint8_t* t =
          tiles.data() + (static_cast<std::size_t>(y / grain) * tiles_x + x / grain) * 3;
      p[0] = t[0];
      p[1] = t[1];
      p[2] = t[2];
    }
  }
  return f;
}

int MovingSquare::square_x(std::int64_t t) const noexcept {
  const std::int64_t span = width - square;
  if (span <= 0) return 0;
  const std::int64_t travel = (t * speed) % (2 * span);
  return static_cast<int>(travel <= span ? travel : 2 * span - travel);
}

Frame MovingSquare::background() const {
  return noise_texture(width, height, grain, base, amplitude, seed);
}

Frame MovingSquare::frame(std::int64_t t) const {
  Frame f = background();
  f.index = t;
  const int x0 = square_x(t);
  const int y0 = square_y();
  for (int y = y0; y < std::min(height, y0 + square); ++y) {
    std::uint8_t* row = f.pixels.data() + (static_cast<std::size_t>(y) * width + x0) * 3;
    std::fill(row, row + static_cast<std::size_t>(std::min(square, width - x0)) * 3, 255);
  }
  return f;
}

Frame TwoRegime::frame(std::int64_t t) const {
  const bool second = switch_frame >= 0 && t >= switch_frame;
  Frame f = second ? noise_texture(width, height, 4, 150, 90, seed + 1)
                   : noise_texture(width, height, 16, 100, 30, seed);
  f.index = t;
  return f;
}

Frame flicker_frame(int width, int height, std::int64_t index, std::uint64_t seed) {
  return noise_texture(width, height, 8, 128, 60, seed * 1000003 + static_cast<std::uint64_t>(index),
                       index);
}

}  // namespace egogaze::synthetic
