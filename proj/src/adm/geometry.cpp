#include "hta/adm/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hta/error.hpp"

namespace hta::adm {

double edge_expression(const Point& a, const Point& b, double t1, double t2) {
  return t1 * (b.y - a.y) - t2 * (b.x - a.x) - (a.x * b.y - a.y * b.x);
}

bool left_of_edge(double t1, double t2, const Point& a, const Point& b) {
  return edge_expression(a, b, t1, t2) <= 0.0;
}

bool HullCluster::contains(double t1, double t2) const {
  const size_t n = vertices.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    if (!left_of_edge(t1, t2, a, b)) return false;
  }
  return true;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Emits hull vertices lying strictly outside edge a->b (cross < 0), in CCW
// order between a and b.
void expand(const Point& a, const Point& b, const std::vector<Point>& outside,
            std::vector<Point>& out) {
  if (outside.empty()) return;
  size_t best = 0;
  double best_d = 0;
  for (size_t i = 0; i < outside.size(); ++i) {
    double d = cross(a, b, outside[i]);
    if (i == 0 || d < best_d || (d == best_d && outside[i] < outside[best])) {
      best = i;
      best_d = d;
    }
  }
  const Point f = outside[best];
  std::vector<Point> left_set, right_set;
  for (const Point& p : outside) {
    if (cross(a, f, p) < 0) left_set.push_back(p);
    if (cross(f, b, p) < 0) right_set.push_back(p);
  }
  expand(a, f, left_set, out);
  out.push_back(f);
  expand(f, b, right_set, out);
}

}  // namespace

std::vector<Point> quickhull(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3)
    throw Error(ErrorKind::degenerate_cluster,
                "convex hull needs at least 3 distinct points, got " +
                    std::to_string(points.size()));

  const Point a = points.front();  // lexicographically smallest
  const Point b = points.back();

  std::vector<Point> below, above;
  for (const Point& p : points) {
    double d = cross(a, b, p);
    if (d < 0) below.push_back(p);
    if (d > 0) above.push_back(p);
  }
  if (below.empty() && above.empty())
    throw Error(ErrorKind::degenerate_cluster, "all points are collinear");

  std::vector<Point> hull;
  hull.push_back(a);
  expand(a, b, below, hull);  // bottom chain, x increasing
  hull.push_back(b);
  expand(b, a, above, hull);  // top chain, x decreasing
  return hull;
}

std::vector<Point> inflated_bounding_box(const std::vector<Point>& points, double pad) {
  double x0 = points.front().x, x1 = x0, y0 = points.front().y, y1 = y0;
  for (const Point& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {{x0 - pad, y0 - pad}, {x1 + pad, y0 - pad}, {x1 + pad, y1 + pad}, {x0 - pad, y1 + pad}};
}

std::vector<Point> hull_or_box(const std::vector<Point>& points, double pad,
                               bool* degenerate) {
  try {
    auto hull = quickhull(points);
    if (degenerate) *degenerate = false;
    return hull;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_cluster) throw;
    if (degenerate) *degenerate = true;
    return inflated_bounding_box(points, pad);
  }
}

}  // namespace hta::adm
