#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"

#include "hta/adm/clustering.hpp"
#include "hta/error.hpp"
#include "hta/rng.hpp"

using namespace hta;
using namespace hta::adm;

namespace {

// Canonical partition: set of sorted member-point lists plus the noise set,
// independent of labeling and input order.
using Part = std::set<std::vector<std::pair<double, double>>>;

Part canonical_partition(const std::vector<Point>& pts, const std::vector<int>& labels,
                         std::vector<std::pair<double, double>>* noise = nullptr) {
  std::map<int, std::vector<std::pair<double, double>>> groups;
  if (noise) noise->clear();
  for (size_t i = 0; i < pts.size(); ++i) {
    if (labels[i] == kNoise) {
      if (noise) noise->push_back({pts[i].x, pts[i].y});
      continue;
    }
    groups[labels[i]].push_back({pts[i].x, pts[i].y});
  }
  Part part;
  for (auto& [label, members] : groups) {
    std::sort(members.begin(), members.end());
    part.insert(members);
  }
  if (noise) std::sort(noise->begin(), noise->end());
  return part;
}

double sq(double v) { return v * v; }

}  // namespace

TEST_CASE("dbscan worked example: one triplet, one noise point") {
  std::vector<Point> pts = {{0, 0}, {0, 1}, {1, 0}, {10, 10}};
  Labeling lab = dbscan_fit(pts, 1.5, 3);
  CHECK(lab.num_clusters == 1);
  CHECK(lab.noise_count == 1);
  CHECK(lab.labels[0] == 0);
  CHECK(lab.labels[1] == 0);
  CHECK(lab.labels[2] == 0);
  CHECK(lab.labels[3] == kNoise);

  // brute-force neighborhood recount confirms core status
  for (size_t i = 0; i < 3; ++i) {
    int neighbors = 0;
    for (size_t j = 0; j < pts.size(); ++j)
      if (sq(pts[i].x - pts[j].x) + sq(pts[i].y - pts[j].y) <= sq(1.5)) ++neighbors;
    CHECK(neighbors >= 3);
  }
}

TEST_CASE("dbscan: min_pts 1 clusters everything, empty input clusters nothing") {
  std::vector<Point> pts = {{0, 0}, {5, 5}, {9, 9}};
  Labeling lab = dbscan_fit(pts, 1.0, 1);
  CHECK(lab.noise_count == 0);
  CHECK(lab.num_clusters == 3);

  Labeling empty = dbscan_fit({}, 1.0, 1);
  CHECK(empty.num_clusters == 0);
  CHECK(empty.labels.empty());
}

TEST_CASE("dbscan partition is invariant under input permutation") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    for (int blob = 0; blob < 3; ++blob) {
      double cx = blob * 20.0, cy = blob * 5.0;
      for (int i = 0; i < 12; ++i)
        pts.push_back({cx + rng.uniform(-2, 2), cy + rng.uniform(-2, 2)});
    }
    for (int i = 0; i < 4; ++i) pts.push_back({rng.uniform(50, 90), rng.uniform(40, 80)});

    Labeling a = dbscan_fit(pts, 3.0, 4);
    std::vector<Point> shuffled = pts;
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.uniform_int(0, i - 1)]);
    Labeling b = dbscan_fit(shuffled, 3.0, 4);

    std::vector<std::pair<double, double>> noise_a, noise_b;
    CHECK(canonical_partition(pts, a.labels, &noise_a) ==
          canonical_partition(shuffled, b.labels, &noise_b));
    CHECK(noise_a == noise_b);
  }
}

TEST_CASE("kmeans: k=1 centroid, separated blobs split purely, k=n zero inertia") {
  SUBCASE("single cluster assigns everything") {
    std::vector<Point> pts = {{0, 0}, {2, 0}, {4, 6}};
    Labeling lab = kmeans_fit(pts, 1);
    CHECK(lab.num_clusters == 1);
    for (int l : lab.labels) CHECK(l == 0);
  }

  SUBCASE("two blobs: assignment matches the exhaustive 2-partition optimum") {
    Rng rng(11);
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({rng.uniform(0, 2), rng.uniform(0, 2)});
    for (int i = 0; i < 10; ++i) pts.push_back({rng.uniform(40, 42), rng.uniform(40, 42)});
    Labeling lab = kmeans_fit(pts, 2);

    // exhaustive partition cost oracle
    auto cost_of = [&](uint32_t mask) {
      double cx[2] = {0, 0}, cy[2] = {0, 0};
      int n[2] = {0, 0};
      for (int i = 0; i < 20; ++i) {
        int side = (mask >> i) & 1;
        cx[side] += pts[i].x;
        cy[side] += pts[i].y;
        n[side] += 1;
      }
      if (n[0] == 0 || n[1] == 0) return 1e18;
      double cost = 0;
      for (int i = 0; i < 20; ++i) {
        int side = (mask >> i) & 1;
        cost += sq(pts[i].x - cx[side] / n[side]) + sq(pts[i].y - cy[side] / n[side]);
      }
      return cost;
    };
    uint32_t best_mask = 1;
    double best_cost = cost_of(1);
    for (uint32_t mask = 2; mask < (1u << 19); ++mask) {
      double c = cost_of(mask);
      if (c < best_cost) {
        best_cost = c;
        best_mask = mask;
      }
    }
    std::set<int> oracle_side0, got_side0;
    for (int i = 0; i < 20; ++i) {
      if (((best_mask >> i) & 1) == (best_mask & 1)) oracle_side0.insert(i);
      if (lab.labels[i] == lab.labels[0]) got_side0.insert(i);
    }
    CHECK(oracle_side0 == got_side0);
  }

  SUBCASE("k equal to point count isolates every point") {
    std::vector<Point> pts = {{0, 0}, {3, 0}, {0, 3}, {9, 9}};
    Labeling lab = kmeans_fit(pts, 4);
    std::set<int> labels(lab.labels.begin(), lab.labels.end());
    CHECK(labels.size() == 4);
  }
}

TEST_CASE("cluster quality indices match direct formula evaluation") {
  // fixed 8-point set: two tight blobs far apart
  std::vector<Point> pts = {{0, 0}, {0, 1}, {1, 0}, {1, 1},
                            {50, 50}, {50, 51}, {51, 50}, {51, 51}};
  std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  QualityMetrics q = cluster_quality(pts, labels);
  CHECK(q.sc > 0.9);

  // direct silhouette evaluation
  auto dist = [&](int i, int j) {
    return std::sqrt(sq(pts[i].x - pts[j].x) + sq(pts[i].y - pts[j].y));
  };
  double sc = 0;
  for (int i = 0; i < 8; ++i) {
    double a = 0, b = 0;
    int own = labels[i];
    for (int j = 0; j < 8; ++j) {
      if (j == i) continue;
      if (labels[j] == own) a += dist(i, j) / 3.0;
      else b += dist(i, j) / 4.0;
    }
    sc += (b - a) / std::max(a, b);
  }
  sc /= 8;
  CHECK(q.sc == doctest::Approx(sc).epsilon(1e-12));

  // direct Davies-Bouldin evaluation: symmetric blobs
  double s0 = 0;
  for (int i = 0; i < 4; ++i)
    s0 += std::sqrt(sq(pts[i].x - 0.5) + sq(pts[i].y - 0.5)) / 4.0;
  double m = std::sqrt(sq(50.0) + sq(50.0));
  CHECK(q.dbi == doctest::Approx((s0 + s0) / m).epsilon(1e-12));
  CHECK(q.chi > 1000);

  SUBCASE("duplicated points split arbitrarily score non-positive") {
    std::vector<Point> dup(6, Point{3, 3});
    std::vector<int> split = {0, 0, 0, 1, 1, 1};
    QualityMetrics qd = cluster_quality(dup, split);
    CHECK(qd.sc <= 0.0);
  }

  SUBCASE("a single cluster leaves the indices undefined") {
    std::vector<int> one = {0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(cluster_quality(pts, one), Error);
  }
}
