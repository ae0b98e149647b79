#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "egogaze/errors.hpp"
#include "egogaze/evalkit.hpp"

namespace egogaze {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(Camera, FocalLength) {
  const CameraModel cam(640, 480);
  EXPECT_NEAR(cam.focal_px(), 554.2562584220408, 1e-9);
  EXPECT_THROW(CameraModel(640, 480, 0.0), ConfigError);
  EXPECT_THROW(CameraModel(640, 480, 180.0), ConfigError);
  EXPECT_THROW(CameraModel(0, 480), ConfigError);
}

TEST(Aae, Examples) {
  const CameraModel cam(640, 480);
  const std::vector<GazeRecord> truth{{0, 320, 240, true}};
  EXPECT_EQ(aae(truth, truth, cam), 0.0);
  const std::vector<GazeRecord> pred{{0, 320 + 97.73033258632917, 240, true}};
  EXPECT_NEAR(aae(pred, truth, cam), 10.0, 1e-9);
}

TEST(Aae, SkipsInvalidTruth) {
  const CameraModel cam(640, 480);
  const double off = cam.focal_px() * std::tan(5.0 * kPi / 180.0);
  const std::vector<GazeRecord> truth{{0, 320, 240, true}, {1, 0, 0, false}};
  const std::vector<GazeRecord> pred{{0, 320, 240 + off, true}, {1, 600, 400, true}};
  EXPECT_NEAR(aae(pred, truth, cam), 5.0, 1e-9);
  const std::vector<GazeRecord> none{{1, 0, 0, false}};
  EXPECT_THROW(aae(pred, none, cam), EmptyEvaluationError);
  EXPECT_THROW(aae({}, truth, cam), EmptyEvaluationError);
}

TEST(Aae, SymmetricAndNonNegative) {
  const CameraModel cam(640, 480, 75.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0, 639), uy(0, 479);
  std::vector<GazeRecord> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back({i, ux(rng), uy(rng), true});
    b.push_back({i, ux(rng), uy(rng), true});
  }
  const double ab = aae(a, b, cam);
  EXPECT_NEAR(ab, aae(b, a, cam), 1e-12);
  EXPECT_GT(ab, 0.0);
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

TEST(KMeans, SeparatedClouds) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.1);
  Matrix pts;
  std::vector<int> truth;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 2;
    pts.push_back({c * 10.0 + n(rng), c * -5.0 + n(rng)});
    truth.push_back(c);
  }
  const auto r = kmeans(pts, 2, 42);
  EXPECT_TRUE(same_partition(r.labels, truth));
}

TEST(KMeans, OnePointPerCluster) {
  const Matrix pts{{0, 0}, {1, 0}, {0, 1}, {5, 5}};
  const auto r = kmeans(pts, 4, 42);
  std::vector<int> sorted = r.labels;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(r.objective.back(), 0.0);
}

TEST(KMeans, IdenticalPoints) {
  const Matrix pts(10, std::vector<double>{1.5, -2.0});
  const auto r = kmeans(pts, 2, 42);
  ASSERT_EQ(r.labels.size(), 10u);
  for (int l : r.labels) EXPECT_TRUE(l == 0 || l == 1);
  EXPECT_EQ(r.objective.back(), 0.0);
}

TEST(KMeans, ObjectiveNonIncreasing) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix pts(80, std::vector<double>(3));
    for (auto& p : pts)
      for (auto& x : p) x = u(rng);
    const auto r = kmeans(pts, 2 + trial % 6, trial);
    for (std::size_t i = 1; i < r.objective.size(); ++i)
      EXPECT_LE(r.objective[i], r.objective[i - 1] + 1e-12);
    EXPECT_EQ(kmeans(pts, 2 + trial % 6, trial).labels, r.labels);
  }
}

TEST(KMeans, Errors) {
  EXPECT_THROW(kmeans({{1.0}}, 2, 1), ConfigError);
  EXPECT_THROW(kmeans({{1.0}, {1.0, 2.0}}, 1, 1), ConfigError);
  EXPECT_THROW(kmeans({{1.0}}, 0, 1), ConfigError);
}

double brute_force(const Matrix& c) {
  std::vector<int> perm(c.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i][perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(Hungarian, Examples) {
  const auto a = hungarian({{1, 2}, {2, 1}});
  EXPECT_EQ(a.row_to_col, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.cost, 2.0);
  const auto d = hungarian({{0, 9, 9}, {9, 0, 9}, {9, 9, 0}});
  EXPECT_EQ(d.row_to_col, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(hungarian({{4, 1}, {1, 4}}).row_to_col, (std::vector<int>{1, 0}));
  EXPECT_TRUE(hungarian({}).row_to_col.empty());
}

TEST(Hungarian, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Matrix c(n, std::vector<double>(n));
    for (auto& row : c)
      for (auto& x : row) x = v(rng);
    const auto a = hungarian(c);
    std::vector<int> cols = a.row_to_col;
    std::sort(cols.begin(), cols.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(cols[i], static_cast<int>(i));
    EXPECT_EQ(a.cost, brute_force(c));
  }
}

TEST(Hungarian, Errors) {
  EXPECT_THROW(hungarian({{1, 2}}), ConfigError);
  EXPECT_THROW(hungarian({{1, std::nan("")}, {1, 2}}), ConfigError);
}

SegmentationInput two_class_toy() {
  SegmentationInput in;
  in.k = 2;
  for (int i = 0; i < 40; ++i) {
    const int label = i < 25 ? 0 : 1;
    in.features.push_back({label * 1.0, 0.5});
    in.truth_labels.push_back(label);
  }
  in.boundaries = {25};
  return in;
}

TEST(SegAccuracy, PerfectSegmentation) {
  EXPECT_EQ(segmentation_accuracy(two_class_toy()), 1.0);
}

TEST(SegAccuracy, SingleSegmentBalanced) {
  SegmentationInput in;
  in.k = 2;
  for (int i = 0; i < 20; ++i) {
    in.features.push_back({static_cast<double>(i)});
    in.truth_labels.push_back(i % 2);
  }
  EXPECT_EQ(segmentation_accuracy(in), 0.5);
}

TEST(SegAccuracy, MajorityMatch) {
  auto in = two_class_toy();
  in.boundaries = {30};  // 5 frames of class 1 land in the first segment
  EXPECT_DOUBLE_EQ(segmentation_accuracy(in), 35.0 / 40.0);
}

TEST(SegAccuracy, RelabelInvariant) {
  std::mt19937_64 rng(2);
  SegmentationInput in;
  in.k = 3;
  std::normal_distribution<double> n(0.0, 0.3);
  for (int i = 0; i < 90; ++i) {
    const int label = (i / 10) % 3;
    in.features.push_back({label + n(rng), n(rng)});
    in.truth_labels.push_back(label);
  }
  for (int b = 7; b < 90; b += 13) in.boundaries.push_back(b);
  const double base = segmentation_accuracy(in);
  auto relabeled = in;
  for (auto& l : relabeled.truth_labels) l = (l + 1) % 3;
  EXPECT_EQ(segmentation_accuracy(relabeled), base);
  relabeled = in;
  for (auto& l : relabeled.truth_labels) l = 2 - l;
  EXPECT_EQ(segmentation_accuracy(relabeled), base);
}

TEST(SegAccuracy, PerVideoAverages) {
  auto a = two_class_toy();
  SegmentationInput both = a;
  // Second video: no boundary, so half credit at best on 10/10 split.
  for (int i = 0; i < 20; ++i) {
    both.features.push_back({static_cast<double>(i % 2), 0.5});
    both.truth_labels.push_back(i < 10 ? 0 : 1);
  }
  const std::vector<FrameRange> videos{{0, 39}, {40, 59}};
  EXPECT_DOUBLE_EQ(segmentation_accuracy(both, videos), (1.0 + 0.5) / 2.0);
}

TEST(SegAccuracy, Errors) {
  auto in = two_class_toy();
  in.truth_labels[3] = 5;
  EXPECT_THROW(segmentation_accuracy(in), ConfigError);
  in = two_class_toy();
  in.truth_labels.pop_back();
  EXPECT_THROW(segmentation_accuracy(in), ConfigError);
  EXPECT_THROW(segmentation_accuracy(SegmentationInput{{}, {}, {}, 2, 42}), EmptyEvaluationError);
}

}  // namespace
}  // namespace egogaze
