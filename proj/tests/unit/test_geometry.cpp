#include <doctest.h>

#include "grouptraj/errors.hpp"
#include "grouptraj/geometry.hpp"

using namespace grouptraj;

TEST_CASE("nearest obstacle on a segment") {
  SceneGeometry scene;
  scene.segments.push_back({{0, 0}, {4, 0}});
  const auto c = nearest_obstacle(scene, {1, 2});
  REQUIRE(c.has_value());
  CHECK(c->point == Vec2{1, 0});
  CHECK(c->normal == Vec2{0, 1});
  CHECK(c->signed_distance == doctest::Approx(2.0));
  CHECK_FALSE(nearest_obstacle(SceneGeometry{}, {0, 0}).has_value());
  CHECK(closest_point_on_segment({{0, 0}, {4, 0}}, {9, 1}) == Vec2{4, 0});
}

TEST_CASE("inside a polygon the distance is negative") {
  SceneGeometry scene;
  scene.polygons.push_back({{{0, 0}, {2, 0}, {2, 2}, {0, 2}}});
  const auto inside = nearest_obstacle(scene, {0.5, 1});
  REQUIRE(inside.has_value());
  CHECK(inside->signed_distance == doctest::Approx(-0.5));
  CHECK(inside->normal.x == doctest::Approx(-1.0));
  const auto outside = nearest_obstacle(scene, {3, 1});
  CHECK(outside->signed_distance == doctest::Approx(1.0));
  CHECK(outside->normal.x == doctest::Approx(1.0));
}

TEST_CASE("scene file parsing") {
  const auto scene = parse_scene("# walls\nseg 0 0 10 0\n\npoly 1 1 2 1 2 2\n");
  CHECK(scene.segments.size() == 1);
  REQUIRE(scene.polygons.size() == 1);
  CHECK(scene.polygons[0].vertices.size() == 3);
  REQUIRE(scene.bounds.has_value());
  CHECK(scene.bounds->max == Vec2{10, 2});
  CHECK_NOTHROW(validate_scene(scene));

  const auto bounded = parse_scene("bounds -5 -5 5 5\nseg 0 0 1 1\n");
  CHECK(bounded.bounds->min == Vec2{-5, -5});
  CHECK_THROWS_AS(validate_scene(parse_scene("bounds 0 0 1 1\nseg 0 0 3 3\n")), ValidationError);
  CHECK_THROWS(parse_scene("seg 0 0 1\n"));
  CHECK_THROWS(parse_scene("circle 0 0 1\n"));
  CHECK_THROWS(parse_scene("poly 0 0 1 1\n"));
}
