#include "grouptraj/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <string>

#include "grouptraj/errors.hpp"

namespace grouptraj {

Vec2 closest_point_on_segment(const Segment& s, Vec2 p) noexcept {
  const Vec2 ab = s.b - s.a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return s.a;
  const double u = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
  return s.a + ab * u;
}

namespace {

// Left-hand normal of a segment; used when the query sits exactly on it.
Vec2 segment_normal(const Segment& s) {
  const Vec2 d = normalized(s.b - s.a);
  return {-d.y, d.x};
}

bool inside_convex(const Polygon& poly, Vec2 p) {
  const auto& v = poly.vertices;
  int sign = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = cross(v[(i + 1) % v.size()] - v[i], p - v[i]);
    if (c == 0.0) continue;
    const int s = c > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return sign != 0;
}

void consider(std::optional<ObstacleContact>& best, Vec2 p, Vec2 q, const Segment& seg,
              bool inside) {
  const Vec2 diff = p - q;
  const double d = norm(diff);
  const double signed_d = inside ? -d : d;
  if (best && std::abs(signed_d) >= std::abs(best->signed_distance)) return;
  Vec2 n;
  if (d > 1e-12) {
    n = inside ? -diff / d : diff / d;
  } else {
    n = segment_normal(seg);
  }
  best = ObstacleContact{q, n, signed_d};
}

}  // namespace

std::optional<ObstacleContact> nearest_obstacle(const SceneGeometry& scene, Vec2 p) {
  std::optional<ObstacleContact> best;
  for (const auto& s : scene.segments) {
    consider(best, p, closest_point_on_segment(s, p), s, false);
  }
  for (const auto& poly : scene.polygons) {
    const auto& v = poly.vertices;
    if (v.size() < 2) continue;
    const bool inside = v.size() >= 3 && inside_convex(poly, p);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Segment edge{v[i], v[(i + 1) % v.size()]};
      consider(best, p, closest_point_on_segment(edge, p), edge, inside);
    }
  }
  return best;
}

void validate_scene(const SceneGeometry& scene) {
  for (const auto& poly : scene.polygons) {
    if (poly.vertices.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  }
  if (!scene.bounds) return;
  const Rect& b = *scene.bounds;
  if (!(b.min.x <= b.max.x && b.min.y <= b.max.y)) throw ValidationError("inverted scene bounds");
  auto check = [&](Vec2 v) {
    if (!b.contains(v)) throw ValidationError("obstacle vertex outside scene bounds");
  };
  for (const auto& s : scene.segments) {
    check(s.a);
    check(s.b);
  }
  for (const auto& poly : scene.polygons) {
    for (Vec2 v : poly.vertices) check(v);
  }
}

SceneGeometry parse_scene(std::string_view text) {
  SceneGeometry scene;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind)) {
      if (end == text.size()) break;
      continue;
    }
    std::vector<double> nums;
    std::string tok;
    while (in >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "bad number '" + tok + "'");
      }
      nums.push_back(v);
    }
    if (kind == "seg") {
      if (nums.size() != 4) throw ParseError(line_no, "seg expects 4 numbers");
      scene.segments.push_back({{nums[0], nums[1]}, {nums[2], nums[3]}});
    } else if (kind == "poly") {
      if (nums.size() < 6 || nums.size() % 2 != 0) {
        throw ParseError(line_no, "poly expects an even count of at least 6 numbers");
      }
      Polygon poly;
      for (std::size_t i = 0; i < nums.size(); i += 2) poly.vertices.push_back({nums[i], nums[i + 1]});
      scene.polygons.push_back(std::move(poly));
    } else if (kind == "bounds") {
      if (nums.size() != 4) throw ParseError(line_no, "bounds expects 4 numbers");
      scene.bounds = Rect{{nums[0], nums[1]}, {nums[2], nums[3]}};
    } else {
      throw ParseError(line_no, "unknown obstacle kind '" + kind + "'");
    }
    if (end == text.size()) break;
  }

  if (!scene.bounds && !scene.empty()) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Rect r{{inf, inf}, {-inf, -inf}};
    auto grow = [&](Vec2 v) {
      r.min.x = std::min(r.min.x, v.x);
      r.min.y = std::min(r.min.y, v.y);
      r.max.x = std::max(r.max.x, v.x);
      r.max.y = std::max(r.max.y, v.y);
    };
    for (const auto& s : scene.segments) {
      grow(s.a);
      grow(s.b);
    }
    for (const auto& poly : scene.polygons) {
      for (Vec2 v : poly.vertices) grow(v);
    }
    scene.bounds = r;
  }
  validate_scene(scene);
  return scene;
}

}  // namespace grouptraj
