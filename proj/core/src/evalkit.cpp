#include "egogaze/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "egogaze/errors.hpp"
#include "egogaze/rng.hpp"

namespace egogaze {

CameraModel::CameraModel(int width, int height, double hfov_degrees)
    : width_(width), height_(height), hfov_degrees_(hfov_degrees) {
  if (width <= 0 || height <= 0) throw ConfigError("camera dimensions must be positive");
  if (!(hfov_degrees > 0.0 && hfov_degrees < 180.0)) {
    throw ConfigError("horizontal field of view must be in (0, 180) degrees");
  }
  focal_px_ = (0.5 * width) / std::tan(0.5 * hfov_degrees * std::numbers::pi / 180.0);
}

double CameraModel::angle_degrees(double x0, double y0, double x1, double y1) const noexcept {
  const double ax = x0 - 0.5 * width_, ay = y0 - 0.5 * height_, az = focal_px_;
  const double bx = x1 - 0.5 * width_, by = y1 - 0.5 * height_, bz = focal_px_;
  const double cx = ay * bz - az * by;
  const double cy = az * bx - ax * bz;
  const double cz = ax * by - ay * bx;
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = ax * bx + ay * by + az * bz;
  return std::atan2(cross, dot) * 180.0 / std::numbers::pi;
}

double aae(std::span<const GazeRecord> pred, std::span<const GazeRecord> truth,
           const CameraModel& camera) {
  std::unordered_map<std::int64_t, const GazeRecord*> by_frame;
  by_frame.reserve(pred.size());
  for (const auto& p : pred) {
    if (p.valid) by_frame[p.frame_index] = &p;
  }
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& t : truth) {
    if (!t.valid) continue;
    auto it = by_frame.find(t.frame_index);
    if (it == by_frame.end()) continue;
    total += camera.angle_degrees(it->second->x, it->second->y, t.x, t.y);
    ++count;
  }
  if (count == 0) throw EmptyEvaluationError("no frame has both a prediction and valid ground truth");
  return total / static_cast<double>(count);
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t pick_index(double u, std::size_t n) {
  return std::min(static_cast<std::size_t>(u * static_cast<double>(n)), n - 1);
}

// Assigns every point to its nearest centroid; returns the objective.
double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels) {
  double objective = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    objective += best_d;
  }
  return objective;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter, double tol) {
  if (points.empty()) throw ConfigError("k-means needs at least one point");
  if (k < 1) throw ConfigError("k-means needs k >= 1");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw ConfigError("k-means with k = " + std::to_string(k) + " exceeds " +
                      std::to_string(points.size()) + " points");
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw ConfigError("k-means points have inconsistent dimensions");
  }

  UniformStream rng(seed);
  const std::size_t n = points.size();
  KMeansResult result;
  result.centroids.reserve(static_cast<std::size_t>(k));
  result.centroids.push_back(points[pick_index(rng.next(), n)]);

  // k-means++: sample proportional to squared distance to the nearest centre.
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (result.centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], result.centroids.back()));
      total += nearest[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      double target = rng.next() * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] > 0.0 && target < nearest[i]) {
          chosen = i;
          break;
        }
        target -= nearest[i];
      }
    }
    result.centroids.push_back(points[chosen]);
  }

  result.labels.assign(n, -1);
  std::vector<int> labels(n, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    result.objective.push_back(assign(points, result.centroids, labels));
    result.iterations = iter + 1;
    const bool unchanged = labels == result.labels;
    result.labels = labels;
    if (unchanged) break;

    Matrix next(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = next[static_cast<std::size_t>(labels[i])];
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
      ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
      if (counts[c] == 0) continue;
      for (auto& v : next[c]) v /= static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(points[i], next[static_cast<std::size_t>(labels[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      next[c] = points[far];
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < next.size(); ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(next[c], result.centroids[c])));
    }
    result.centroids = std::move(next);
    if (shift <= tol) {
      result.objective.push_back(assign(points, result.centroids, labels));
      result.labels = labels;
      break;
    }
  }
  return result;
}

Assignment hungarian(const Matrix& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n) throw ConfigError("Hungarian cost matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v)) throw ConfigError("Hungarian cost matrix has a non-finite entry");
    }
  }
  Assignment out;
  if (n == 0) return out;

  // 1-based potentials; match[j] is the row assigned to column j.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.row_to_col.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    out.row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.cost += cost[i][static_cast<std::size_t>(out.row_to_col[i])];
  }
  return out;
}

namespace {

double score_video(const SegmentationInput& input, FrameRange range) {
  const std::size_t dim = input.features[range.first].size();
  std::vector<std::size_t> starts{range.first};
  for (std::size_t b : input.boundaries) {
    if (b > range.first && b <= range.last) starts.push_back(b);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  Matrix means;
  means.reserve(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : range.last + 1;
    std::vector<double> mean(dim, 0.0);
    for (std::size_t r = starts[s]; r < end; ++r) {
      for (std::size_t d = 0; d < dim; ++d) mean[d] += input.features[r][d];
    }
    for (auto& m : mean) m /= static_cast<double>(end - starts[s]);
    means.push_back(std::move(mean));
  }

  const int clusters = std::min<int>(input.k, static_cast<int>(means.size()));
  const KMeansResult km = kmeans(means, clusters, input.seed);

  const auto size = static_cast<std::size_t>(input.k);
  Matrix cost(size, std::vector<double>(size, 0.0));
  std::size_t seg = 0;
  for (std::size_t r = range.first; r <= range.last; ++r) {
    while (seg + 1 < starts.size() && r >= starts[seg + 1]) ++seg;
    const auto pred = static_cast<std::size_t>(km.labels[seg]);
    const auto truth = static_cast<std::size_t>(input.truth_labels[r]);
    cost[pred][truth] -= 1.0;
  }
  const Assignment match = hungarian(cost);
  return -match.cost / static_cast<double>(range.last - range.first + 1);
}

}  // namespace

double segmentation_accuracy(const SegmentationInput& input, std::span<const FrameRange> videos) {
  if (input.k < 1) throw ConfigError("segmentation k must be >= 1");
  const std::size_t rows = input.features.size();
  if (rows == 0) throw EmptyEvaluationError("no frames to score");
  if (input.truth_labels.size() != rows) {
    throw ConfigError("features have " + std::to_string(rows) + " rows but truth has " +
                      std::to_string(input.truth_labels.size()) + " labels");
  }
  const std::size_t dim = input.features.front().size();
  for (const auto& f : input.features) {
    if (f.size() != dim) throw ConfigError("feature rows have inconsistent dimensions");
  }
  for (int label : input.truth_labels) {
    if (label < 0 || label >= input.k) {
      throw ConfigError("truth label " + std::to_string(label) + " outside [0, " +
                        std::to_string(input.k) + ")");
    }
  }

  if (videos.empty()) return score_video(input, {0, rows - 1});
  double total = 0.0;
  for (const auto& v : videos) {
    if (v.first > v.last || v.last >= rows) {
      throw ConfigError("video range [" + std::to_string(v.first) + ", " +
                        std::to_string(v.last) + "] lies outside the " + std::to_string(rows) +
                        " scored frames");
    }
    total += score_video(input, v);
  }
  return total / static_cast<double>(videos.size());
}

}  // namespace egogaze
