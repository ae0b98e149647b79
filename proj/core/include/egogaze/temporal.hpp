#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <vector>

#include "egogaze/energy.hpp"
#include "egogaze/lattice.hpp"
#include "egogaze/surprise_map.hpp"

namespace egogaze {

enum class DecayForm : std::uint8_t {
  OneMinusB,  // raw weight a * (1 - b)^(i - 1)
  B,          // raw weight a * b^(i - 1)
};

struct DecayParams {
  double a = 1.0;
  double b = 0.95;
  DecayForm form = DecayForm::OneMinusB;
};

/// Normalised lag weights w_1..w_k, non-increasing, summing to one.
struct DecayWeights {
  int k = 0;
  DecayParams params;
  std::vector<double> weights;
};

/// Throws ConfigError unless k >= 1, a > 0 and 0 < b < 1.
DecayWeights decay_weights(int k, const DecayParams& params);
DecayWeights decay_weights(int k, double a, double b);

/// The last k feature configurations, oldest first.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(int capacity);

  int capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Configuration `lag` frames before the next one to be pushed (lag >= 1).
  const Configuration& lag(std::size_t lag) const { return entries_[entries_.size() - lag]; }
  const Configuration& newest() const { return entries_.back(); }

  /// Appends and evicts the oldest entry when full. Throws PipelineError
  /// unless the frame index follows the newest entry.
  void push(Configuration config);

  void clear() noexcept { entries_.clear(); }

 private:
  int capacity_;
  std::deque<Configuration> entries_;
};

/// Functional form of HistoryBuffer::push.
HistoryBuffer push_history(HistoryBuffer buffer, Configuration config);

/// Weighted temporal bond energy of every cell against the same cell in
/// the last m = min(k, |history|) configurations. When m < k the weights
/// are recomputed for a window of m. Empty history yields an all-zero map.
///
/// Throws PipelineError when any history entry has a different geometry.
SurpriseMap temporal_aggregate(const Configuration& current, const HistoryBuffer& history,
                               const DecayWeights& weights, const EnergyParams& params);

/// Copy of `current` with generator energies taken from `surprise`.
Configuration apply_surprise(Configuration current, const SurpriseMap& surprise);

/// Writes the map as a binary 8-bit PGM at frame resolution (nearest
/// neighbour), grey = round(255 * v / max_energy).
void write_surprise_pgm(const std::filesystem::path& path, const SurpriseMap& surprise,
                        double max_energy);

}  // namespace egogaze
