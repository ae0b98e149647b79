#pragma once

#include <cstdint>
#include <vector>

#include "egogaze/features.hpp"

// Deterministic synthetic videos with analytically known content, used by
// the test suites, the benchmarks and the `synth` CLI subcommand.
namespace egogaze::synthetic {

Frame constant_frame(int width, int height, std::int64_t index, std::uint8_t r, std::uint8_t g,
                     std::uint8_t b);

/// Blocky random-colour texture: square tiles of `grain` pixels whose
/// channels are drawn uniformly from [base - amplitude, base + amplitude].
Frame noise_texture(int width, int height, int grain, int base, int amplitude, std::uint64_t seed,
                    std::int64_t index = 0);

struct MovingSquare {
  int width = 640;
  int height = 480;
  int frames = 300;
  int square = 40;
  int speed = 4;  // px/frame, horizontal, reflecting at the frame edges
  std::uint64_t seed = 7;
  // Background texture.
  int grain = 8;
  int base = 40;
  int amplitude = 40;

  /// Top-left corner of the square at frame t.
  int square_x(std::int64_t t) const noexcept;
  int square_y() const noexcept { return (height - square) / 2; }
  double center_x(std::int64_t t) const noexcept { return square_x(t) + 0.5 * square; }
  double center_y() const noexcept { return square_y() + 0.5 * square; }

  /// Static textured background with the bright square composited on top.
  Frame frame(std::int64_t t) const;
  Frame background() const;
};

/// Static texture A for frames < switch_frame, texture B afterwards. The
/// two textures use different grain and amplitude.
struct TwoRegime {
  int width = 640;
  int height = 480;
  int frames = 300;
  int switch_frame = 100;  // negative disables the switch
  std::uint64_t seed = 11;

  Frame frame(std::int64_t t) const;
};

/// Independent noise texture every frame (no temporal structure).
Frame flicker_frame(int width, int height, std::int64_t index, std::uint64_t seed);

}  // namespace egogaze::synthetic
