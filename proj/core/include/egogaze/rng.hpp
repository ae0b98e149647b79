#pragma once

#include <cstdint>
#include <random>

namespace egogaze {

/// Seeded U[0, 1) stream. The conversion from 64-bit words is fixed here
/// rather than left to std::uniform_real_distribution so that outputs are
/// identical across standard library implementations.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed = 42) : engine_(seed) {}

  double next() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Total draws since construction.
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace egogaze
