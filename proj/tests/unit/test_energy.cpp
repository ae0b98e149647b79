#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "egogaze/energy.hpp"
#include "egogaze/errors.hpp"
#include "egogaze/lattice.hpp"

namespace egogaze {
namespace {

using Vec = std::vector<double>;

Vec random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

TEST(Energy, AppearanceExamples) {
  EXPECT_EQ(phi_appearance(Vec{0.3, 0.4}, Vec{0.3, 0.4}), 0.0);
  EXPECT_NEAR(phi_appearance(Vec{1, 0}, Vec{0, 1}), 1.0, 1e-15);
  EXPECT_NEAR(phi_appearance(Vec{1, 1}, Vec{1, 0}), 0.29289321881345254, 1e-15);
  EXPECT_EQ(phi_appearance(Vec{0, 0}, Vec{0, 0}), 0.0);
  EXPECT_EQ(phi_appearance(Vec{0, 0}, Vec{1, 0}), 1.0);
  EXPECT_NEAR(phi_appearance(Vec{1, 0}, Vec{-1, 0}), 2.0, 1e-15);
}

TEST(Energy, IdenticalVectorsAreExactlyZero) {
  std::mt19937_64 rng(31);
  EnergyParams params;
  for (int i = 0; i < 200; ++i) {
    const Vec u = random_vec(rng, 2 + rng() % 60);
    EXPECT_EQ(phi_appearance(u, u), 0.0);
    EXPECT_EQ(phi_motion(u, u, params.motion_mode), 0.0);
    EXPECT_EQ(bond_energy(u, u, params), 0.0);
  }
}

TEST(Energy, AppearanceErrors) {
  EXPECT_THROW(phi_appearance(Vec{1, 2}, Vec{1, 2, 3}), DimensionError);
  EXPECT_THROW(phi_appearance(Vec{}, Vec{}), DimensionError);
}

TEST(Energy, MotionExamples) {
  const auto p = MotionMode::PearsonDissimilarity;
  EXPECT_NEAR(phi_motion(Vec{1, 2, 3}, Vec{1, 2, 3}, p), 0.0, 1e-15);
  EXPECT_NEAR(phi_motion(Vec{1, 2, 3}, Vec{3, 2, 1}, p), 1.0, 1e-15);
  EXPECT_EQ(phi_motion(Vec{1, 2, 3}, Vec{2, 2, 2}, p), 0.0);
  // Means 1 and 2: ((0-1)(0-2) + (2-1)(4-2)) / 2.
  EXPECT_DOUBLE_EQ(phi_motion(Vec{0, 2}, Vec{0, 4}, MotionMode::RawCovariance), 2.0);
  EXPECT_THROW(phi_motion(Vec{1}, Vec{1}, p), DimensionError);
  EXPECT_THROW(phi_motion(Vec{1, 2}, Vec{1, 2, 3}, p), DimensionError);
}

TEST(Energy, CombinedCapsAtAlpha) {
  EnergyParams params;
  // phi_a = 1 (orthogonal) and phi_m = 1 (anti-correlated) saturate the cap.
  EXPECT_EQ(phi_combined(Vec{1, 0}, Vec{0, 1}, params), 1.0);
  EXPECT_EQ(phi_combined(Vec{0.2, 0.5, 0.9}, Vec{0.2, 0.5, 0.9}, params), 0.0);
  params.alpha = 5.0;
  EXPECT_NEAR(phi_combined(Vec{1, 0}, Vec{0, 1}, params), 2.0, 1e-15);
}

TEST(Energy, CombinedFloorsRawCovariance) {
  EnergyParams params;
  params.motion_mode = MotionMode::RawCovariance;
  // phi_a = 0.2, raw covariance = -0.25.
  EXPECT_EQ(phi_combined(Vec{1, 2}, Vec{2, 1}, params), 0.0);
  EXPECT_GE(phi_combined(Vec{1, 2}, Vec{1, 2}, params), 0.0);
}

TEST(Energy, BondExamples) {
  EnergyParams params;
  EXPECT_EQ(bond_energy(Vec{0.1, 0.2}, Vec{0.1, 0.2}, params), 0.0);
  // [1,1] is constant, so only the appearance term contributes.
  EXPECT_NEAR(bond_energy(Vec{1, 1}, Vec{1, 0}, params), 0.28479555178735655, 1e-12);
  params.w_s = 2.0;
  EXPECT_NEAR(bond_energy(Vec{1, 0}, Vec{0, 1}, params), 1.5231883119115297, 1e-12);
  EXPECT_NEAR(params.max_bond_energy(), 1.5231883119115297, 1e-15);
}

TEST(Energy, ConfigurationEnergySums) {
  const auto g = build_geometry(4, 4, 2);
  auto map = SurpriseMap::zeros(g, 0);
  EXPECT_EQ(configuration_energy(map), 0.0);
  map.values = {0.1, 0.2, 0.3, 0.4};
  EXPECT_NEAR(configuration_energy(map), 1.0, 1e-15);
  const double before = configuration_energy(map);
  map.values[2] += 1e-9;
  EXPECT_GT(configuration_energy(map), before);
}

TEST(Energy, SymmetryScaleAndBounds) {
  std::mt19937_64 rng(17);
  EnergyParams params;
  params.w_s = 1.7;
  params.alpha = 0.8;
  for (int i = 0; i < 500; ++i) {
    const auto n = 2 + rng() % 60;
    const Vec u = random_vec(rng, n), v = random_vec(rng, n);
    EXPECT_DOUBLE_EQ(phi_appearance(u, v), phi_appearance(v, u));
    EXPECT_DOUBLE_EQ(phi_motion(u, v, params.motion_mode), phi_motion(v, u, params.motion_mode));
    EXPECT_DOUBLE_EQ(bond_energy(u, v, params), bond_energy(v, u, params));
    Vec scaled = v;
    for (auto& x : scaled) x *= 3.25;
    EXPECT_NEAR(phi_appearance(u, scaled), phi_appearance(u, v), 1e-12);
    const double b = bond_energy(u, v, params);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, params.max_bond_energy());
  }
}

TEST(Energy, Validate) {
  EXPECT_NO_THROW(validate(EnergyParams{}));
  EXPECT_THROW(validate(EnergyParams{0.0, 1.0}), ConfigError);
  EXPECT_THROW(validate(EnergyParams{1.0, -1.0}), ConfigError);
}

}  // namespace
}  // namespace egogaze
