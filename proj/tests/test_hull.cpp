#include <algorithm>
#include <set>

#include "doctest.h"

#include "hta/adm/geometry.hpp"
#include "hta/error.hpp"
#include "hta/rng.hpp"

using namespace hta;
using namespace hta::adm;

namespace {

// O(n^3) edge-test hull: (a, b) is a hull edge iff every other point lies
// strictly left of a->b. Returns the vertex set (order-free).
std::set<std::pair<double, double>> brute_force_hull_vertices(const std::vector<Point>& pts) {
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::set<std::pair<double, double>> verts;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool edge = true;
      for (size_t k = 0; k < n && edge; ++k) {
        if (k == i || k == j) continue;
        if (cross(pts[i], pts[j], pts[k]) <= 0) edge = false;
      }
      if (edge) {
        verts.insert({pts[i].x, pts[i].y});
        verts.insert({pts[j].x, pts[j].y});
      }
    }
  }
  return verts;
}

double polygon_area2(const std::vector<Point>& poly) {
  double a = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return a;
}

}  // namespace

TEST_CASE("edge expression matches the hand-computed sign test") {
  Point a{0, 0}, b{0, 10};
  CHECK(edge_expression(a, b, -1, 5) == doctest::Approx(-10));
  CHECK(left_of_edge(-1, 5, a, b));
  CHECK(edge_expression(a, b, 1, 5) == doctest::Approx(10));
  CHECK(!left_of_edge(1, 5, a, b));
  CHECK(edge_expression(a, b, 0, 5) == 0.0);
  CHECK(left_of_edge(0, 5, a, b));  // boundary counts as inside
}

TEST_CASE("quickhull on simple shapes") {
  SUBCASE("triangle comes back counterclockwise") {
    auto hull = quickhull({{0, 0}, {4, 0}, {2, 3}});
    REQUIRE(hull.size() == 3);
    CHECK(polygon_area2(hull) > 0);
    CHECK(hull[0].x == 0);  // starts at the lexicographic minimum
  }

  SUBCASE("unit square with center drops the center") {
    auto hull = quickhull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
    CHECK(hull.size() == 4);
    CHECK(polygon_area2(hull) == doctest::Approx(2.0));
  }

  SUBCASE("collinear interior points are dropped") {
    auto hull = quickhull({{0, 0}, {2, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 4}});
    CHECK(hull.size() == 4);
  }

  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS(quickhull({{0, 0}, {1, 1}}), Error);
    CHECK_THROWS_AS(quickhull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), Error);
    CHECK_THROWS_AS(quickhull({{1, 1}, {1, 1}, {1, 1}}), Error);
  }
}

TEST_CASE("quickhull equals the brute-force hull on random sets") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    int n = static_cast<int>(rng.uniform_int(3, 50));
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    std::vector<Point> hull;
    try {
      hull = quickhull(pts);
    } catch (const Error&) {
      continue;  // measure-zero degenerate draw
    }
    auto expected = brute_force_hull_vertices(pts);
    std::set<std::pair<double, double>> got;
    for (const Point& p : hull) got.insert({p.x, p.y});
    CHECK(got == expected);
    CHECK(polygon_area2(hull) > 0);
  }
}

TEST_CASE("hull containment and convexity closure on the slot grid") {
  // Feature points are integral (arrival slot, duration), so containment is
  // exact arithmetic; convex combinations use dyadic weights to stay exact.
  Rng rng(77);
  int combos = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Point> pts;
    int n = static_cast<int>(rng.uniform_int(5, 40));
    for (int i = 0; i < n; ++i)
      pts.push_back({static_cast<double>(rng.uniform_int(0, 1439)),
                     static_cast<double>(rng.uniform_int(1, 400))});
    HullCluster cluster;
    try {
      cluster.vertices = quickhull(pts);
    } catch (const Error&) {
      continue;
    }
    for (const Point& p : pts) CHECK(cluster.contains(p.x, p.y));

    // convex combinations of inside points stay inside
    for (int k = 0; k < 50; ++k) {
      const Point& a = pts[rng.uniform_int(0, n - 1)];
      const Point& b = pts[rng.uniform_int(0, n - 1)];
      double w = static_cast<double>(rng.uniform_int(0, 16)) / 16.0;
      CHECK(cluster.contains(w * a.x + (1 - w) * b.x, w * a.y + (1 - w) * b.y));
      ++combos;
    }

    // every edge midpoint is inside under the boundary rule
    for (size_t i = 0; i < cluster.vertices.size(); ++i) {
      const Point& a = cluster.vertices[i];
      const Point& b = cluster.vertices[(i + 1) % cluster.vertices.size()];
      CHECK(cluster.contains((a.x + b.x) / 2, (a.y + b.y) / 2));
    }
  }
  CHECK(combos >= 1000);
}

TEST_CASE("rectangle fallback inflates degenerate clusters") {
  bool degenerate = false;
  auto box = hull_or_box({{10, 5}}, 0.5, &degenerate);
  CHECK(degenerate);
  REQUIRE(box.size() == 4);
  HullCluster cluster;
  cluster.vertices = box;
  CHECK(cluster.contains(10, 5));
  CHECK(cluster.contains(10.5, 5.5));
  CHECK(!cluster.contains(11, 5));

  auto line = hull_or_box({{0, 0}, {4, 0}}, 0.5, &degenerate);
  CHECK(degenerate);
  cluster.vertices = line;
  CHECK(cluster.contains(2, 0));
  CHECK(cluster.contains(0, -0.5));
  CHECK(!cluster.contains(2, 1));

  auto proper = hull_or_box({{0, 0}, {4, 0}, {2, 3}}, 0.5, &degenerate);
  CHECK(!degenerate);
  CHECK(proper.size() == 3);
}
