#include "egogaze/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egogaze/errors.hpp"

namespace egogaze {

namespace {

void check_lengths(std::span<const double> u, std::span<const double> v, std::size_t min_len) {
  if (u.size() != v.size()) {
    throw DimensionError("feature length mismatch: " + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()));
  }
  if (u.size() < min_len) {
    throw DimensionError("feature vectors need at least " + std::to_string(min_len) +
                         " components, got " + std::to_string(u.size()));
  }
}

bool is_constant(std::span<const double> u) {
  return std::all_of(u.begin(), u.end(), [&](double x) { return x == u.front(); });
}

// sqrt(a * b) is exact for a == b, so identical vectors give a similarity
// of exactly 1. Falls back to the split form on overflow or underflow.
double norm_product(double a, double b) {
  const double joint = std::sqrt(a * b);
  if (std::isfinite(joint) && joint > 0.0) return joint;
  return std::sqrt(a) * std::sqrt(b);
}

double mean(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x;
  return s / static_cast<double>(u.size());
}

}  // namespace

double EnergyParams::max_bond_energy() const noexcept { return w_s * std::tanh(alpha); }

void validate(const EnergyParams& params) {
  if (!(params.w_s > 0.0)) throw ConfigError("w_s must be > 0");
  if (!(params.alpha > 0.0)) throw ConfigError("alpha must be > 0");
}

double phi_appearance(std::span<const double> u, std::span<const double> v) {
  check_lengths(u, v, 1);
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  const bool u_zero = uu == 0.0;
  const bool v_zero = vv == 0.0;
  if (u_zero && v_zero) return 0.0;
  if (u_zero || v_zero) return 1.0;
  const double cosine = std::clamp(dot / norm_product(uu, vv), -1.0, 1.0);
  return 1.0 - cosine;
}

double phi_motion(std::span<const double> u, std::span<const double> v, MotionMode mode) {
  check_lengths(u, v, 2);
  if (mode == MotionMode::PearsonDissimilarity && (is_constant(u) || is_constant(v))) {
    return 0.0;
  }
  const double mu = mean(u);
  const double mv = mean(v);
  double cov = 0.0, su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu;
    const double dv = v[i] - mv;
    cov += du * dv;
    su += du * du;
    sv += dv * dv;
  }
  if (mode == MotionMode::RawCovariance) return cov / static_cast<double>(u.size());
  if (su == 0.0 || sv == 0.0) return 0.0;
  const double r = std::clamp(cov / norm_product(su, sv), -1.0, 1.0);
  return 0.5 * (1.0 - r);
}

double phi_combined(std::span<const double> u, std::span<const double> v,
                    const EnergyParams& params) {
  const double sum = phi_appearance(u, v) + phi_motion(u, v, params.motion_mode);
  return std::clamp(sum, 0.0, params.alpha);
}

double bond_energy(std::span<const double> u, std::span<const double> v,
                   const EnergyParams& params) {
  return params.w_s * std::tanh(phi_combined(u, v, params));
}

double configuration_energy(const SurpriseMap& surprise) noexcept {
  double total = 0.0;
  for (double v : surprise.values) total += v;
  return total;
}

}  // namespace egogaze
