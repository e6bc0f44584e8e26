#pragma once

#include <vector>

namespace hta::adm {

// Feature point: x = arrival slot-of-day, y = stay duration in slots.
struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

// Edge sign expression for edge a->b and point (t1, t2):
//   t1*(b.y - a.y) - t2*(b.x - a.x) - (a.x*b.y - a.y*b.x)
// On counterclockwise hulls the interior satisfies expression <= 0; the
// boundary counts as inside so training points cannot self-alarm.
double edge_expression(const Point& a, const Point& b, double t1, double t2);
bool left_of_edge(double t1, double t2, const Point& a, const Point& b);

// Convex hull of a 2D cluster, counterclockwise starting from the
// lexicographically smallest vertex. Degenerate clusters (< 3 distinct or
// collinear points) are stored as their bounding box inflated by half a slot.
struct HullCluster {
  int occupant = 0;
  int zone = 0;
  std::vector<Point> vertices;
  bool degenerate = false;
  int point_count = 0;

  bool contains(double t1, double t2) const;
};

// Counterclockwise convex hull, strictly convex after deduplication.
// Throws ErrorKind::degenerate_cluster for < 3 distinct points or collinear
// input.
std::vector<Point> quickhull(std::vector<Point> points);

// Axis-aligned bounding box of the points inflated by pad on each side, CCW.
std::vector<Point> inflated_bounding_box(const std::vector<Point>& points, double pad);

// quickhull with the rectangle fallback; sets *degenerate when it applied.
std::vector<Point> hull_or_box(const std::vector<Point>& points, double pad,
                               bool* degenerate);

}  // namespace hta::adm
