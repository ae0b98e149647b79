#include "egogaze/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>

#include "egogaze/errors.hpp"

namespace egogaze {

DecayWeights decay_weights(int k, const DecayParams& params) {
  if (k < 1) throw ConfigError("temporal window k must be >= 1, got " + std::to_string(k));
  if (!(params.a > 0.0)) throw ConfigError("decay initial value a must be > 0");
  if (!(params.b > 0.0 && params.b < 1.0)) throw ConfigError("decay factor b must be in (0, 1)");

  const double ratio = params.form == DecayForm::OneMinusB ? 1.0 - params.b : params.b;
  DecayWeights w;
  w.k = k;
  w.params = params;
  w.weights.resize(static_cast<std::size_t>(k));
  double raw = params.a;
  double total = 0.0;
  for (auto& x : w.weights) {
    x = raw;
    total += raw;
    raw *= ratio;
  }
  for (auto& x : w.weights) x /= total;
  return w;
}

DecayWeights decay_weights(int k, double a, double b) {
  return decay_weights(k, DecayParams{a, b, DecayForm::OneMinusB});
}

HistoryBuffer::HistoryBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("history capacity must be >= 1");
}

void HistoryBuffer::push(Configuration config) {
  if (!entries_.empty() && config.frame_index != entries_.back().frame_index + 1) {
    throw PipelineError("frame " + std::to_string(config.frame_index) +
                        " pushed after frame " + std::to_string(entries_.back().frame_index));
  }
  if (entries_.size() == static_cast<std::size_t>(capacity_)) entries_.pop_front();
  entries_.push_back(std::move(config));
}

HistoryBuffer push_history(HistoryBuffer buffer, Configuration config) {
  buffer.push(std::move(config));
  return buffer;
}

SurpriseMap temporal_aggregate(const Configuration& current, const HistoryBuffer& history,
                               const DecayWeights& weights, const EnergyParams& params) {
  SurpriseMap map = SurpriseMap::zeros(current.geometry, current.frame_index);
  const std::size_t m = std::min(history.size(), static_cast<std::size_t>(weights.k));
  if (m == 0) return map;

  const DecayWeights window =
      m == static_cast<std::size_t>(weights.k) ? weights
                                               : decay_weights(static_cast<int>(m), weights.params);
  for (std::size_t i = 1; i <= m; ++i) {
    const Configuration& past = history.lag(i);
    if (!(past.geometry == current.geometry)) {
      throw PipelineError("history frame " + std::to_string(past.frame_index) +
                          " has a different grid than frame " +
                          std::to_string(current.frame_index));
    }
    const double w = window.weights[i - 1];
    for (std::size_t c = 0; c < map.values.size(); ++c) {
      map.values[c] += w * bond_energy(current.generators[c].features,
                                       past.generators[c].features, params);
    }
  }
  return map;
}

Configuration apply_surprise(Configuration current, const SurpriseMap& surprise) {
  for (std::size_t c = 0; c < current.generators.size(); ++c) {
    current.generators[c].energy = surprise.values[c];
  }
  return current;
}

void write_surprise_pgm(const std::filesystem::path& path, const SurpriseMap& surprise,
                        double max_energy) {
  const GridGeometry& g = surprise.geometry;
  std::vector<unsigned char> cell_grey(surprise.values.size());
  for (std::size_t c = 0; c < cell_grey.size(); ++c) {
    const double v = std::clamp(surprise.values[c] / max_energy, 0.0, 1.0);
    cell_grey[c] = static_cast<unsigned char>(std::floor(255.0 * v + 0.5));
  }
  std::vector<unsigned char> row(static_cast<std::size_t>(g.frame_width()));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << g.frame_width() << ' ' << g.frame_height() << "\n255\n";
  for (int y = 0; y < g.frame_height(); ++y) {
    const int r = std::min(y / g.cell_height(), g.n() - 1);
    for (int x = 0; x < g.frame_width(); ++x) {
      const int c = std::min(x / g.cell_width(), g.n() - 1);
      row[static_cast<std::size_t>(x)] = cell_grey[g.flat({r, c})];
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace egogaze
