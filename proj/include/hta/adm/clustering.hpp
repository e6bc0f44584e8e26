#pragma once

#include <vector>

#include "hta/adm/geometry.hpp"

namespace hta::adm {

constexpr int kNoise = -1;

struct Labeling {
  std::vector<int> labels;  // cluster id per point, kNoise for noise
  int num_clusters = 0;
  int noise_count = 0;
};

// Density clustering over raw slot units. Neighborhoods include the point
// itself; border points join the cluster of their nearest core neighbor
// (ties: lexicographically smallest core), so the partition is invariant
// under input permutation up to cluster renaming. Cluster ids are ordered by
// each cluster's smallest member point.
Labeling dbscan_fit(const std::vector<Point>& points, double eps, int min_pts);

// Lloyd iteration to an assignment fixpoint from deterministic farthest-point
// seeding (first seed: farthest from the centroid; ties by lowest index).
// Every point is assigned; there is no noise.
Labeling kmeans_fit(const std::vector<Point>& points, int k);

struct QualityMetrics {
  double dbi = 0;  // lower is better
  double sc = 0;   // higher is better
  double chi = 0;  // higher is better
};

// Textbook cluster validity indices over the non-noise points.
// Throws ErrorKind::undefined_metric with fewer than 2 non-empty clusters.
QualityMetrics cluster_quality(const std::vector<Point>& points,
                               const std::vector<int>& labels);

}  // namespace hta::adm
