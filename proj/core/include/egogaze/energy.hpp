#pragma once

#include <cstdint>
#include <span>

#include "egogaze/surprise_map.hpp"

namespace egogaze {

enum class MotionMode : std::uint8_t {
  PearsonDissimilarity,  // (1 - r) / 2 of the mean-centred vectors
  RawCovariance,         // sum((u - mean u)(v - mean v)) / len
};

struct EnergyParams {
  double w_s = 1.0;    // bond-energy scale
  double alpha = 1.0;  // cap on the combined dissimilarity
  MotionMode motion_mode = MotionMode::PearsonDissimilarity;

  /// Largest value bond_energy can return: w_s * tanh(alpha).
  double max_bond_energy() const noexcept;
};

/// Throws ConfigError unless w_s > 0 and alpha > 0.
void validate(const EnergyParams& params);

/// Cosine distance 1 - cos(u, v), in [0, 2]. Both vectors zero gives 0,
/// exactly one zero gives 1. Throws DimensionError on length mismatch or
/// empty input.
double phi_appearance(std::span<const double> u, std::span<const double> v);

/// Motion dissimilarity. Pearson mode returns 0 when either vector is
/// constant. Requires len >= 2.
double phi_motion(std::span<const double> u, std::span<const double> v, MotionMode mode);

/// min(alpha, phi_appearance + phi_motion), floored at 0 so the raw
/// covariance mode cannot produce negative energies.
double phi_combined(std::span<const double> u, std::span<const double> v,
                    const EnergyParams& params);

/// w_s * tanh(phi_combined(u, v)).
double bond_energy(std::span<const double> u, std::span<const double> v,
                   const EnergyParams& params);

/// Sum of per-cell surprise. Higher means more surprise.
double configuration_energy(const SurpriseMap& surprise) noexcept;

}  // namespace egogaze
