#include <doctest.h>

#include <random>
#include <set>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"
#include "grouptraj/retrieval.hpp"

using namespace grouptraj;
using grouptraj::testing::straight_track;

namespace {

constexpr double kDt = 0.3999;

QueryPose moving_pose(Vec2 pos, Vec2 dir) {
  QueryPose q;
  q.pos = pos;
  q.dir = normalized(dir);
  q.speed = 1.0;
  q.stationary = false;
  return q;
}

std::vector<Trajectory> random_walks(std::mt19937_64& rng, int n_tracks, int max_len, double extent) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> len(3, max_len);
  std::vector<Trajectory> tracks;
  for (int i = 0; i < n_tracks; ++i) {
    Trajectory t{std::to_string(i), {}};
    Vec2 p{u(rng) * extent, u(rng) * extent};
    Vec2 heading{u(rng), u(rng)};
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      t.points.push_back({k, k * kDt, p});
      heading += Vec2{u(rng), u(rng)} * 0.3;
      p += normalized(heading) * 0.5;
    }
    tracks.push_back(std::move(t));
  }
  return tracks;
}

}  // namespace

TEST_CASE("exact pose match scores zero") {
  Config cfg;
  const auto db = build_database({straight_track("5", 0, 6, {0, 0}, {1, 0}, kDt)}, cfg);
  const auto& s = db.samples()[1];
  const auto q = moving_pose(s.pos, s.direction);
  const auto hits = query_similar(db, q, 1, QueryOptions::from_config(cfg));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].sample == 1);
  CHECK(hits[0].score == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("aligned sample ranks before perpendicular at equal distance") {
  Config cfg;
  std::vector<Trajectory> tracks{straight_track("1", 0, 3, {0, 3}, {1, 0}, kDt),
                                 straight_track("2", 0, 3, {0, -3}, {0, 1}, kDt)};
  // Shift so that both third points are 2 m from the query.
  tracks[0].points = {{0, 0, {-2, 2}}, {1, kDt, {-1, 2}}, {2, 2 * kDt, {0, 2}}};
  tracks[1].points = {{0, 0, {0, -4}}, {1, kDt, {0, -3}}, {2, 2 * kDt, {0, -2}}};
  const auto db = build_database(tracks, cfg);
  const auto hits = query_similar(db, moving_pose({0, 0}, {1, 0}), 2, QueryOptions::from_config(cfg));
  REQUIRE(hits.size() == 2);
  CHECK(db.agent_id(db.samples()[hits[0].sample]) == "1");
  CHECK(hits[0].score == doctest::Approx(0.2));
  CHECK(hits[1].score == doctest::Approx(1.2));
}

TEST_CASE("opposite headings are excluded") {
  Config cfg;
  const auto db = build_database({straight_track("1", 0, 8, {10, 0}, {-1, 0}, kDt),
                                  straight_track("2", 0, 8, {10, 2}, {-1, -0.2}, kDt)},
                                 cfg);
  CHECK(query_similar(db, moving_pose({0, 0}, {1, 0}), 5, QueryOptions::from_config(cfg)).empty());
}

TEST_CASE("empty database") {
  Config cfg;
  const auto db = build_database({}, cfg);
  CHECK(query_similar(db, moving_pose({0, 0}, {1, 0}), 5, QueryOptions::from_config(cfg)).empty());
}

TEST_CASE("duplicate tracks and dedup flag") {
  Config cfg;
  const auto t = straight_track("1", 0, 6, {0, 0}, {1, 0}, kDt);
  auto u = t;
  u.agent_id = "2";
  const auto db = build_database({t, u}, cfg);
  const auto q = moving_pose({0.5, 0}, {1, 0});
  auto opts = QueryOptions::from_config(cfg);
  const auto dedup = query_similar(db, q, 5, opts);
  REQUIRE(dedup.size() == 2);
  std::set<std::string> agents;
  for (const auto& h : dedup) agents.insert(db.agent_id(db.samples()[h.sample]));
  CHECK(agents == std::set<std::string>{"1", "2"});
  // Ties go to the lower agent id.
  CHECK(db.agent_id(db.samples()[dedup[0].sample]) == "1");

  opts.one_per_agent = false;
  CHECK(query_similar(db, q, 5, opts).size() == 5);

  opts.one_per_agent = true;
  opts.excluded_agents = {"1"};
  const auto loo = query_similar(db, q, 5, opts);
  REQUIRE(loo.size() == 1);
  CHECK(db.agent_id(db.samples()[loo[0].sample]) == "2");
}

TEST_CASE("stationary queries and samples") {
  Config cfg;
  const auto still = straight_track("1", 0, 6, {1, 1}, {0, 0}, kDt);
  const auto db = build_database({still}, cfg);
  QueryPose q;
  q.pos = {1, 1};
  const auto hits = query_similar(db, q, 1, QueryOptions::from_config(cfg));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].score == 0.0);
  CHECK(query_similar(db, moving_pose({1, 1}, {1, 0}), 1, QueryOptions::from_config(cfg)).empty());
}

TEST_CASE("indexed query matches exhaustive scan") {
  Config cfg;
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tracks = random_walks(rng, 5 + trial * 7, 60, 5.0 + trial * 3);
    const auto db = build_database(tracks, cfg);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int qi = 0; qi < 10; ++qi) {
      const double extent = 8.0 + trial * 3;
      const auto q = moving_pose({u(rng) * extent, u(rng) * extent}, {u(rng), u(rng)});
      for (bool dedup : {true, false}) {
        auto opts = QueryOptions::from_config(cfg);
        opts.one_per_agent = dedup;
        const std::size_t k = 1 + qi % 6;
        const auto got = query_similar(db, q, k, opts);
        const auto want = grouptraj::testing::exhaustive_query(db, q, k, cfg.neighborhood_range,
                                                               cfg.direction_weight, dedup);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].sample == want[i].sample);
          CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("similarity score properties") {
  Config cfg;
  std::mt19937_64 rng(77);
  const auto tracks = random_walks(rng, 10, 20, 5.0);
  const auto db = build_database(tracks, cfg);
  const auto opts = QueryOptions::from_config(cfg);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& s : db.samples()) {
    const auto q = moving_pose({u(rng) * 5, u(rng) * 5}, {u(rng), u(rng)});
    const auto score = similarity_score(db, s, q, opts);
    if (score) CHECK(*score > 0.0);
    if (s.moving()) {
      const auto self = similarity_score(db, s, moving_pose(s.pos, s.direction), opts);
      REQUIRE(self.has_value());
      CHECK(*self == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("candidate destinations") {
  Config cfg;
  SUBCASE("stationary group with an empty database") {
    const auto center = straight_track("g", 0, 30, {2, 3}, {0, 0}, kDt);
    const auto c = candidate_destinations(center, build_database({}, cfg), cfg, QueryOptions::from_config(cfg));
    REQUIRE(c.destinations.size() == 1);
    CHECK(c.destinations[0] == Vec2{2, 3});
    CHECK(c.provenance[0] == kLinearContinuation);
  }
  SUBCASE("linear continuation from the origin") {
    Trajectory center = straight_track("g", 0, 30, {0, 0}, {1.25, 0}, kDt);
    for (auto& p : center.points) p.pos.x -= center.points.back().pos.x;
    const auto c = candidate_destinations(center, build_database({}, cfg), cfg, QueryOptions::from_config(cfg));
    REQUIRE(c.destinations.size() == 1);
    CHECK(c.destinations[0].x == doctest::Approx(1.25 * 30 * 0.3999).epsilon(1e-12));
    CHECK(c.destinations[0].y == 0.0);
    CHECK_FALSE(c.short_history);
  }
  SUBCASE("five neighbours plus the continuation") {
    std::vector<Trajectory> history;
    for (int i = 0; i < 7; ++i) {
      history.push_back(straight_track(std::to_string(100 + i), 0, 40, {-5, 0.5 * i}, {1.2, 0}, kDt));
    }
    const auto db = build_database(history, cfg);
    const auto center = straight_track("g", 0, 10, {0, 0}, {1.2, 0}, kDt);
    const auto c = candidate_destinations(center, db, cfg, QueryOptions::from_config(cfg));
    REQUIRE(c.destinations.size() == 6);
    CHECK(c.provenance.back() == kLinearContinuation);
    CHECK(c.short_history);
    for (std::size_t i = 0; i + 1 < c.provenance.size(); ++i) CHECK(c.provenance[i] != kLinearContinuation);
    const auto again = candidate_destinations(center, db, cfg, QueryOptions::from_config(cfg));
    CHECK(again.destinations == c.destinations);
    CHECK(again.provenance == c.provenance);
  }
}
