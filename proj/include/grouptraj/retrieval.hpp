#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grouptraj/database.hpp"

namespace grouptraj {

/// Pose used to look up similar historical agents.
struct QueryPose {
  Vec2 pos;
  /// Unit average-direction vector; zero when stationary.
  Vec2 dir;
  /// Mean speed over the known window, m/s.
  double speed = 0.0;
  bool stationary = true;
};

/// Pose at the last point of `known`, direction from the full history.
QueryPose make_query_pose(const Trajectory& known);

struct QueryOptions {
  double neighborhood_range = 10.0;
  double direction_weight = 1.0;
  bool one_per_agent = true;
  /// Base agent ids whose samples are skipped (leave-one-out).
  std::vector<std::string> excluded_agents;

  static QueryOptions from_config(const Config& cfg);
};

struct SimilarSample {
  std::uint32_t sample = 0;
  double score = 0.0;
};

/// score = |q.pos - s.pos| / range + w * (1 - cos(q.dir, s.dir)).
/// nullopt when the sample is excluded: opposite heading (cos < 0), a
/// stationary sample for a moving query, or an excluded agent.
std::optional<double> similarity_score(const TrajectoryDatabase& db, const DatabaseSample& s,
                                       const QueryPose& q, const QueryOptions& opts);

/// Up to k lowest-score samples, ascending by (score, agent id, sample).
std::vector<SimilarSample> query_similar(const TrajectoryDatabase& db, const QueryPose& q,
                                         std::size_t k, const QueryOptions& opts);

inline constexpr const char* kLinearContinuation = "linear-continuation";

struct CandidateDestinations {
  std::vector<Vec2> destinations;
  /// Database agent id per destination, or "linear-continuation".
  std::vector<std::string> provenance;
  QueryPose pose;
  /// Fewer than known_time_steps points were available.
  bool short_history = false;
};

/// k retrieved destinations followed by the straight-line continuation
/// last_pos + dir * speed * (predict_time_steps * step_duration).
CandidateDestinations candidate_destinations(const Trajectory& group_center,
                                             const TrajectoryDatabase& db, const Config& cfg,
                                             const QueryOptions& opts);

}  // namespace grouptraj
