#include "hta/adm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hta/error.hpp"

namespace hta::adm {

namespace {

double dist2(const Point& a, const Point& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

Labeling dbscan_fit(const std::vector<Point>& points, double eps, int min_pts) {
  const size_t n = points.size();
  Labeling out;
  out.labels.assign(n, kNoise);
  if (n == 0) return out;

  const double eps2 = eps * eps;
  std::vector<std::vector<int>> neighbors(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (dist2(points[i], points[j]) <= eps2) neighbors[i].push_back(static_cast<int>(j));

  std::vector<bool> core(n);
  for (size_t i = 0; i < n; ++i)
    core[i] = static_cast<int>(neighbors[i].size()) >= min_pts;

  // Connected components of core points under eps-adjacency.
  std::vector<int> comp(n, -1);
  int num_comp = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!core[i] || comp[i] != -1) continue;
    std::vector<int> stack{static_cast<int>(i)};
    comp[i] = num_comp;
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (int q : neighbors[p]) {
        if (core[q] && comp[q] == -1) {
          comp[q] = num_comp;
          stack.push_back(q);
        }
      }
    }
    ++num_comp;
  }

  // Border points: nearest core neighbor decides membership.
  for (size_t i = 0; i < n; ++i) {
    if (core[i]) {
      out.labels[i] = comp[i];
      continue;
    }
    int best = -1;
    double best_d = 0;
    for (int q : neighbors[i]) {
      if (!core[q]) continue;
      double d = dist2(points[i], points[q]);
      if (best == -1 || d < best_d ||
          (d == best_d && points[q] < points[best])) {
        best = q;
        best_d = d;
      }
    }
    out.labels[i] = best == -1 ? kNoise : comp[best];
  }

  // Renumber clusters by smallest member point for stable ids.
  std::vector<Point> smallest(num_comp, Point{std::numeric_limits<double>::max(),
                                              std::numeric_limits<double>::max()});
  for (size_t i = 0; i < n; ++i)
    if (out.labels[i] != kNoise)
      smallest[out.labels[i]] = std::min(smallest[out.labels[i]], points[i]);
  std::vector<int> order(num_comp);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return smallest[a] < smallest[b]; });
  std::vector<int> rank(num_comp);
  for (int r = 0; r < num_comp; ++r) rank[order[r]] = r;
  for (size_t i = 0; i < n; ++i)
    if (out.labels[i] != kNoise) out.labels[i] = rank[out.labels[i]];

  out.num_clusters = num_comp;
  for (size_t i = 0; i < n; ++i)
    if (out.labels[i] == kNoise) ++out.noise_count;
  return out;
}

Labeling kmeans_fit(const std::vector<Point>& points, int k) {
  const int n = static_cast<int>(points.size());
  Labeling out;
  out.labels.assign(n, 0);
  if (n == 0 || k < 1) return out;
  k = std::min(k, n);
  out.num_clusters = k;

  Point centroid{0, 0};
  for (const Point& p : points) {
    centroid.x += p.x;
    centroid.y += p.y;
  }
  centroid.x /= n;
  centroid.y /= n;

  std::vector<Point> centers;
  {
    int first = 0;
    double best = -1;
    for (int i = 0; i < n; ++i) {
      double d = dist2(points[i], centroid);
      if (d > best) {
        best = d;
        first = i;
      }
    }
    centers.push_back(points[first]);
    std::vector<double> min_d(n);
    for (int i = 0; i < n; ++i) min_d[i] = dist2(points[i], centers[0]);
    while (static_cast<int>(centers.size()) < k) {
      int far = 0;
      for (int i = 1; i < n; ++i)
        if (min_d[i] > min_d[far]) far = i;
      centers.push_back(points[far]);
      for (int i = 0; i < n; ++i)
        min_d[i] = std::min(min_d[i], dist2(points[i], centers.back()));
    }
  }

  std::vector<int>& labels = out.labels;
  for (int iter = 0; iter < 1000; ++iter) {
    bool changed = iter == 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = dist2(points[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        double d = dist2(points[i], centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<Point> sums(k, Point{0, 0});
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[labels[i]].x += points[i].x;
      sums[labels[i]].y += points[i].y;
      counts[labels[i]] += 1;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // keep previous center
      centers[c] = {sums[c].x / counts[c], sums[c].y / counts[c]};
    }
    // Re-seed empty clusters with the point farthest from its center.
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      int far = 0;
      double fd = -1;
      for (int i = 0; i < n; ++i) {
        double d = dist2(points[i], centers[labels[i]]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      centers[c] = points[far];
    }
  }
  return out;
}

QualityMetrics cluster_quality(const std::vector<Point>& points,
                               const std::vector<int>& labels) {
  std::map<int, std::vector<int>> members;
  for (size_t i = 0; i < points.size(); ++i)
    if (labels[i] != kNoise) members[labels[i]].push_back(static_cast<int>(i));
  const int k = static_cast<int>(members.size());
  if (k < 2)
    throw Error(ErrorKind::undefined_metric,
                "cluster validity indices need at least 2 clusters, got " +
                    std::to_string(k));

  std::vector<std::vector<int>> cluster;
  for (auto& [id, idx] : members) cluster.push_back(idx);

  int n = 0;
  for (auto& c : cluster) n += static_cast<int>(c.size());

  auto dist = [&](int i, int j) { return std::sqrt(dist2(points[i], points[j])); };

  // Silhouette coefficient.
  std::vector<int> cluster_of(points.size(), -1);
  for (int c = 0; c < k; ++c)
    for (int i : cluster[c]) cluster_of[i] = c;
  double sc_sum = 0;
  for (int c = 0; c < k; ++c) {
    for (int i : cluster[c]) {
      double a = 0;
      if (cluster[c].size() > 1) {
        for (int j : cluster[c])
          if (j != i) a += dist(i, j);
        a /= static_cast<double>(cluster[c].size() - 1);
      } else {
        sc_sum += 0;  // singleton convention: s = 0
        continue;
      }
      double b = std::numeric_limits<double>::max();
      for (int c2 = 0; c2 < k; ++c2) {
        if (c2 == c) continue;
        double m = 0;
        for (int j : cluster[c2]) m += dist(i, j);
        m /= static_cast<double>(cluster[c2].size());
        b = std::min(b, m);
      }
      double denom = std::max(a, b);
      sc_sum += denom > 0 ? (b - a) / denom : 0.0;
    }
  }

  // Centroids and scatter.
  std::vector<Point> centers(k, Point{0, 0});
  for (int c = 0; c < k; ++c) {
    for (int i : cluster[c]) {
      centers[c].x += points[i].x;
      centers[c].y += points[i].y;
    }
    centers[c].x /= static_cast<double>(cluster[c].size());
    centers[c].y /= static_cast<double>(cluster[c].size());
  }
  Point global{0, 0};
  for (int c = 0; c < k; ++c)
    for (int i : cluster[c]) {
      global.x += points[i].x;
      global.y += points[i].y;
    }
  global.x /= n;
  global.y /= n;

  std::vector<double> scatter(k, 0);
  double within = 0;
  for (int c = 0; c < k; ++c) {
    for (int i : cluster[c]) {
      double d2 = dist2(points[i], centers[c]);
      scatter[c] += std::sqrt(d2);
      within += d2;
    }
    scatter[c] /= static_cast<double>(cluster[c].size());
  }

  // Davies-Bouldin index.
  double dbi = 0;
  for (int c = 0; c < k; ++c) {
    double worst = 0;
    for (int c2 = 0; c2 < k; ++c2) {
      if (c2 == c) continue;
      double m = std::sqrt(dist2(centers[c], centers[c2]));
      if (m > 0) worst = std::max(worst, (scatter[c] + scatter[c2]) / m);
    }
    dbi += worst;
  }
  dbi /= k;

  // Calinski-Harabasz index.
  double between = 0;
  for (int c = 0; c < k; ++c)
    between += static_cast<double>(cluster[c].size()) * dist2(centers[c], global);
  double chi = within > 0
                   ? (between / (k - 1)) / (within / std::max(n - k, 1))
                   : std::numeric_limits<double>::infinity();

  return {dbi, sc_sum / n, chi};
}

}  // namespace hta::adm
