#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace grouptraj {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) noexcept = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }

/// Unit vector along `a`, or the zero vector when |a| <= eps.
inline Vec2 normalized(Vec2 a, double eps = 1e-12) noexcept {
  const double n = norm(a);
  return n > eps ? a / n : Vec2{};
}

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Convex polygon, vertices in order (either orientation).
struct Polygon {
  std::vector<Vec2> vertices;
};

struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p, double eps = 1e-9) const noexcept {
    return p.x >= min.x - eps && p.x <= max.x + eps && p.y >= min.y - eps && p.y <= max.y + eps;
  }
};

Vec2 closest_point_on_segment(const Segment& s, Vec2 p) noexcept;

/// Static obstacles of a scene, in meters.
struct SceneGeometry {
  std::vector<Segment> segments;
  std::vector<Polygon> polygons;
  std::optional<Rect> bounds;

  bool empty() const noexcept { return segments.empty() && polygons.empty(); }
};

/// Nearest obstacle point to a query position.
struct ObstacleContact {
  Vec2 point;
  /// Unit vector pointing from the obstacle towards free space at `point`.
  Vec2 normal;
  /// Negative when the query lies inside a polygon.
  double signed_distance = 0.0;
};

std::optional<ObstacleContact> nearest_obstacle(const SceneGeometry& scene, Vec2 p);

/// Throws ValidationError when an obstacle vertex falls outside the bounds
/// or a polygon has fewer than three vertices.
void validate_scene(const SceneGeometry& scene);

/// Parses the plain-text scene format:
///   seg x1 y1 x2 y2
///   poly x1 y1 x2 y2 x3 y3 ...
///   bounds xmin ymin xmax ymax
/// Blank lines and lines starting with '#' are ignored. When no `bounds`
/// line is present the bounding box of all obstacles is used.
SceneGeometry parse_scene(std::string_view text);

}  // namespace grouptraj
