#include <doctest.h>

#include <map>
#include <random>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"
#include "grouptraj/canonical_csv.hpp"
#include "grouptraj/database.hpp"
#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

using namespace grouptraj;
using grouptraj::testing::loop_average_direction;

namespace {

Trajectory from_positions(const std::vector<Vec2>& pos, double dt = 0.4) {
  Trajectory t{"a", {}};
  for (std::size_t i = 0; i < pos.size(); ++i) {
    t.points.push_back({static_cast<Frame>(i), static_cast<double>(i) * dt, pos[i]});
  }
  return t;
}

}  // namespace

TEST_CASE("resample interpolates onto the grid") {
  Trajectory t{"a", {{0, 0.0, {0, 0}}, {2, 0.8, {0.8, 0}}}};
  const auto r = resample_trajectory(t, 0.4);
  REQUIRE(r.size() == 3);
  CHECK(r.points[0].pos.x == 0.0);
  CHECK(r.points[1].pos.x == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.points[2].pos.x == 0.8);
  CHECK(r.points[1].frame == 1);
}

TEST_CASE("resample at the reference step duration") {
  Trajectory t{"a", {{0, 0.0, {0, 0}}, {1, 1.0, {2.0, 0}}}};
  const auto r = resample_trajectory(t, 0.3999);
  REQUIRE(r.size() == 3);
  CHECK(r.points[1].t == doctest::Approx(0.3999));
  CHECK(r.points[1].pos.x == doctest::Approx(0.7998).epsilon(1e-12));
}

TEST_CASE("resample of a uniform track is the identity and idempotent") {
  const double dt = 0.3999;
  const auto t = grouptraj::testing::straight_track("7", 3, 20, {1, 2}, {0.9, -0.3}, dt);
  const auto r = resample_trajectory(t, dt);
  CHECK(r == t);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Trajectory raw{"x", {}};
    double time = u(rng) + 5.0;
    for (int i = 0; i < 12; ++i) {
      time += 0.1 + (u(rng) + 5.0) / 10.0;
      raw.points.push_back({i, time, {u(rng), u(rng)}});
    }
    const auto once = resample_trajectory(raw, dt);
    if (once.size() < 2) continue;
    CHECK(resample_trajectory(once, dt) == once);
  }
}

TEST_CASE("resample rejects short and unordered input") {
  CHECK_THROWS_AS(resample_trajectory(Trajectory{"a", {{0, 0.0, {}}}}, 0.4), TooFewPointsError);
  Trajectory back{"a", {{0, 1.0, {}}, {1, 0.5, {}}}};
  CHECK_THROWS_AS(resample_trajectory(back, 0.4), DataError);
  Trajectory ok{"a", {{0, 0.0, {}}, {1, 0.5, {}}}};
  CHECK_THROWS_AS(resample_trajectory(ok, 0.0), ValidationError);
}

TEST_CASE("velocity by finite differences") {
  SUBCASE("stationary") {
    const auto t = from_positions({{1, 1}, {1, 1}, {1, 1}});
    CHECK(velocity_at(t, 1) == Vec2{0, 0});
  }
  SUBCASE("backward difference") {
    const auto t = from_positions({{0, 0}, {0.4, 0}, {0.8, 0}});
    const Vec2 v = velocity_at(t, 2);
    CHECK(v.x == doctest::Approx(1.0));
    CHECK(v.y == 0.0);
  }
  SUBCASE("forward difference at the first frame") {
    const auto t = from_positions({{0, 0}, {0, 0.5}, {0, 1.0}});
    const Vec2 v = velocity_at(t, 0);
    CHECK(v.x == 0.0);
    CHECK(v.y == doctest::Approx(1.25));
  }
  SUBCASE("unknown frame") {
    const auto t = from_positions({{0, 0}, {1, 0}});
    CHECK_THROWS_AS(velocity_at(t, 9), OutOfRangeError);
  }
}

TEST_CASE("average direction hand values") {
  const auto t = from_positions({{0, 0}, {1, 0}, {2, 0}});
  CHECK(average_direction(t, 3) == Vec2{1.5, 0});
  const auto still = from_positions({{3, 3}, {3, 3}, {3, 3}, {3, 3}, {3, 3}});
  CHECK(average_direction(still, 5) == Vec2{0, 0});
  const auto two = from_positions({{0, 0}, {0, 2}});
  CHECK(average_direction(two, 2) == Vec2{0, 2});
  CHECK_THROWS_AS(average_direction(two, 1), InsufficientHistoryError);
  CHECK_THROWS_AS(average_direction(two, 3), OutOfRangeError);
}

TEST_CASE("average direction matches the loop oracle, shifts and scales") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> pos(2 + trial % 40);
    for (auto& p : pos) p = {u(rng), u(rng)};
    const auto t = from_positions(pos);
    const std::size_t step = pos.size();
    const Vec2 got = average_direction(t, step);
    const Vec2 want = loop_average_direction(pos, step);
    CHECK(got.x == doctest::Approx(want.x).epsilon(1e-12));
    CHECK(got.y == doctest::Approx(want.y).epsilon(1e-12));

    auto scaled = pos;
    for (auto& p : scaled) p = p * 2.0;
    const Vec2 s = average_direction(from_positions(scaled), step);
    CHECK(s.x == doctest::Approx(2.0 * got.x).epsilon(1e-12));
    CHECK(s.y == doctest::Approx(2.0 * got.y).epsilon(1e-12));
  }
  // Integer-valued shifts keep the arithmetic exact.
  std::vector<Vec2> pos{{1, 2}, {4, 3}, {2, 9}, {7, 7}};
  auto shifted = pos;
  for (auto& p : shifted) p = p + Vec2{16, -32};
  CHECK(average_direction(from_positions(pos), 4) == average_direction(from_positions(shifted), 4));
}

TEST_CASE("mean speed") {
  const auto t = from_positions({{0, 0}, {0.4, 0}, {0.8, 0}});
  CHECK(mean_speed(t) == doctest::Approx(1.0));
  CHECK(mean_speed(from_positions({{0, 0}})) == 0.0);
}

TEST_CASE("slice and index_of") {
  const auto t = grouptraj::testing::straight_track("a", 10, 10, {}, {1, 0}, 0.4);
  CHECK(t.index_of(12) == 2u);
  CHECK_FALSE(t.index_of(30).has_value());
  const auto s = t.slice(12, 14);
  REQUIRE(s.size() == 3);
  CHECK(s.first_frame() == 12);
  CHECK(s.last_frame() == 14);
}

TEST_CASE("agent id ordering") {
  CHECK(agent_id_less("2", "10"));
  CHECK_FALSE(agent_id_less("10", "2"));
  CHECK(agent_id_less("7", "7#2"));
  CHECK(agent_id_less("7#2", "7#3"));
  CHECK(agent_id_less("7#3", "8"));
  CHECK(agent_id_less("9", "abc"));
  CHECK(base_agent_id("7#2") == "7");
  CHECK(base_agent_id("7") == "7");
}

TEST_CASE("config validation") {
  Config cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.step_duration = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = Config{};
  cfg.t1 = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = Config{};
  cfg.k_candidates = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("database sample counts and lossless indexing") {
  Config cfg;
  SUBCASE("empty") {
    const auto db = build_database({}, cfg);
    CHECK(db.empty());
  }
  SUBCASE("one track of five points") {
    const auto db = build_database({grouptraj::testing::straight_track("1", 0, 5, {}, {1, 0}, 0.4)}, cfg);
    REQUIRE(db.samples().size() == 3);
    CHECK(db.samples()[0].step == 3);
    CHECK(db.samples()[2].destination == Vec2{1.6, 0});
  }
  SUBCASE("suffix reconstruction") {
    std::vector<Trajectory> tracks;
    for (int i = 0; i < 6; ++i) {
      tracks.push_back(grouptraj::testing::straight_track(std::to_string(i), i, 4 + i, {0, double(i)},
                                                          {1, 0.1 * i}, 0.4));
    }
    const auto db = build_database(tracks, cfg);
    std::map<std::string, std::vector<Vec2>> got;
    for (const auto& s : db.samples()) got[db.agent_id(s)].push_back(s.pos);
    for (const auto& t : tracks) {
      std::vector<Vec2> want;
      for (std::size_t k = 2; k < t.size(); ++k) want.push_back(t.points[k].pos);
      CHECK(got[t.agent_id] == want);
    }
  }
}

TEST_CASE("canonical csv round trip") {
  std::vector<Trajectory> tracks{
      grouptraj::testing::straight_track("10", 0, 3, {0.1, 0.2}, {1.0 / 3.0, 0}, 0.3999),
      grouptraj::testing::straight_track("2", 5, 2, {-1e-7, 3e5}, {0, 1}, 0.3999),
  };
  sort_by_agent(tracks);
  const std::string csv = write_canonical_csv(tracks);
  CHECK(csv.rfind("frame,agent_id,x,y\n", 0) == 0);
  CHECK(read_canonical_csv(csv, 0.3999) == tracks);
  CHECK(write_canonical_csv(read_canonical_csv(csv, 0.3999)) == csv);
  CHECK(write_canonical_csv({}) == "frame,agent_id,x,y\n");
  CHECK_THROWS_AS(read_canonical_csv("frame,agent_id,x,y\n1,a,0,0\n1,a,1,1\n", 0.4), ParseError);
  CHECK_THROWS_AS(read_canonical_csv("1,a,0,0\n", 0.4), ParseError);
}
