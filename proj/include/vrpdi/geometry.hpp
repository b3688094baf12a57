#pragma once

#include <cmath>

namespace vrpdi {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return a * s; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

// Velocities share the representation of points.
using Vector2 = Point2;

constexpr double dot(Vector2 a, Vector2 b) { return a.x * b.x + a.y * b.y; }

inline double norm(Vector2 v) { return std::hypot(v.x, v.y); }

inline double euclidean_distance(Point2 a, Point2 b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
}

}  // namespace vrpdi
