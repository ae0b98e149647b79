#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace egogaze {

/// Pinhole camera used to turn pixel offsets into viewing rays.
class CameraModel {
 public:
  /// Throws ConfigError unless width, height > 0 and 0 < hfov < 180.
  CameraModel(int width, int height, double hfov_degrees = 60.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double hfov_degrees() const noexcept { return hfov_degrees_; }
  double focal_px() const noexcept { return focal_px_; }

  /// Angle in degrees between the rays through two pixels.
  double angle_degrees(double x0, double y0, double x1, double y1) const noexcept;

 private:
  int width_;
  int height_;
  double hfov_degrees_;
  double focal_px_;
};

struct GazeRecord {
  std::int64_t frame_index = 0;
  double x = 0.0;
  double y = 0.0;
  bool valid = true;
};

/// Mean angular error in degrees over frames where the truth record is
/// valid and a valid prediction exists for the same frame index.
/// Throws EmptyEvaluationError when no frame qualifies.
double aae(std::span<const GazeRecord> pred, std::span<const GazeRecord> truth,
           const CameraModel& camera);

using Matrix = std::vector<std::vector<double>>;

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;
  /// Within-cluster sum of squares after each assignment step.
  std::vector<double> objective;
  int iterations = 0;
};

/// Lloyd's algorithm from a k-means++ start. Assignment ties go to the
/// lowest cluster id; a cluster left empty is moved onto the point
/// farthest from its current centroid. Stops when no label changes or no
/// centroid moves more than `tol`.
///
/// Throws ConfigError if k < 1, k > |points|, or dimensions differ.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 100,
                    double tol = 1e-4);

struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect matching of a square matrix (Kuhn-Munkres with
/// potentials, O(n^3)). Throws ConfigError for non-square or non-finite
/// input.
Assignment hungarian(const Matrix& cost);

/// Inclusive row range belonging to one video.
struct FrameRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct SegmentationInput {
  /// Row positions where a new predicted segment starts.
  std::vector<std::size_t> boundaries;
  Matrix features;
  std::vector<int> truth_labels;  // dense in [0, k)
  int k = 0;
  std::uint64_t seed = 42;
};

/// Frame accuracy after clustering predicted segments by their mean feature
/// and matching clusters to truth classes with the Hungarian method.
/// Videos listed in `videos` are scored independently and averaged; an
/// empty list scores all rows as one video.
///
/// With fewer segments than k, only that many clusters are formed.
double segmentation_accuracy(const SegmentationInput& input, std::span<const FrameRange> videos = {});

}  // namespace egogaze
